//! Dirac-model nonlocal dielectric permittivities of pristine graphene.
//!
//! Two components are evaluated: the longitudinal ε_L, which drives TM
//! reflection, and the transverse ε_Tr, which drives TE reflection. Each is
//! the sum of a zero-temperature closed form and a thermal correction given
//! as a one-dimensional Fermi-weighted integral. Internally every kernel is
//! dimensionless. Real-axis quantities are scaled by ω (ν = v_F q/ω).
//! Imaginary-axis quantities are scaled by Q = √(v_F²q² + ξ²).
//!
//! Since ε_Tr − 1 grows like 1/ω² at small frequency, the product
//! frequency²·(ε_Tr − 1) is carried alongside as `regularized_tr`; it stays
//! finite at ξ = 0.

mod convert;
mod imag_axis;
mod real_axis;

pub use convert::{
    conductivity_to_eps, eps_to_conductivity, eps_to_polarization, polarization_to_eps,
    Conductivity, PolarizationComponents,
};
pub use imag_axis::eps_imag_axis;
pub use real_axis::eps_real_axis;

use crate::error::{Error, Result};
use crate::params::{MatsubaraPoint, PhysicalParams, SpectralPoint, SPEED_OF_LIGHT};
use num_complex::Complex64;

/// Fermi-factor argument beyond which thermal integrands are dropped
/// (e^{-40} ≈ 4e-18); the dropped tail is bounded analytically.
pub const DEFAULT_FERMI_CUTOFF: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseConfig {
    /// Relative tolerance of the thermal integrals.
    pub rel_tol: f64,
    pub fermi_cutoff: f64,
    pub max_cells: usize,
}

impl Default for ResponseConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            fermi_cutoff: DEFAULT_FERMI_CUTOFF,
            max_cells: 2000,
        }
    }
}

impl ResponseConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectralRegion {
    /// q ≤ ω/c
    Propagating,
    /// ω/c < q ≤ ω/v_F
    Plasmonic,
    /// q > ω/v_F
    DeepEvanescent,
}

impl SpectralRegion {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectralRegion::Propagating => "propagating",
            SpectralRegion::Plasmonic => "plasmonic",
            SpectralRegion::DeepEvanescent => "deep_evanescent",
        }
    }
}

impl std::fmt::Display for SpectralRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_region(p: SpectralPoint, params: &PhysicalParams) -> SpectralRegion {
    if p.q * SPEED_OF_LIGHT <= p.omega {
        SpectralRegion::Propagating
    } else if p.q * params.fermi_velocity() <= p.omega {
        SpectralRegion::Plasmonic
    } else {
        SpectralRegion::DeepEvanescent
    }
}

/// The pair of a zero-temperature term and a thermal correction.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResponseParts {
    /// ε_L − 1
    pub eps_l_minus_one: Complex64,
    /// frequency² · (ε_Tr − 1), in (rad/s)²
    pub regularized_tr: Complex64,
}

/// Longitudinal and transverse permittivity at one spectral point.
///
/// `regularized_tr` is ω²(ε_Tr − 1) on the real axis and ξ²(ε_Tr − 1) on the
/// imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermittivityPair {
    pub eps_l: Complex64,
    pub eps_tr: Complex64,
    pub regularized_tr: Complex64,
    pub zero_temperature: ResponseParts,
    pub thermal: ResponseParts,
    /// Absolute error estimate of ε_L.
    pub err_l: f64,
    /// Absolute error estimate of `regularized_tr`.
    pub err_regularized_tr: f64,
}

impl PermittivityPair {
    fn assemble(zero: ResponseParts, thermal: ResponseParts, freq_sq: f64, err_l: f64, err_tr: f64) -> Self {
        let eps_l_minus_one = zero.eps_l_minus_one + thermal.eps_l_minus_one;
        let regularized_tr = zero.regularized_tr + thermal.regularized_tr;
        let eps_tr = if freq_sq > 0.0 {
            Complex64::new(1.0, 0.0) + regularized_tr / freq_sq
        } else if regularized_tr == Complex64::new(0.0, 0.0) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(f64::INFINITY, 0.0)
        };
        Self {
            eps_l: Complex64::new(1.0, 0.0) + eps_l_minus_one,
            eps_tr,
            regularized_tr,
            zero_temperature: zero,
            thermal,
            err_l,
            err_regularized_tr: err_tr,
        }
    }

    /// Permittivity of vacuum (both components equal to one).
    pub fn vacuum() -> Self {
        Self::assemble(ResponseParts::default(), ResponseParts::default(), 1.0, 0.0, 0.0)
    }

    /// Largest relative error estimate of the two components.
    pub fn relative_error(&self) -> f64 {
        let rel = |err: f64, v: Complex64| if v.norm() > 0.0 { err / v.norm() } else { err };
        rel(self.err_l, self.eps_l - 1.0).max(rel(self.err_regularized_tr, self.regularized_tr))
    }
}

/// Scale parameters of the thermal kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalKernelParams {
    /// (ω − v_F q)/(2c), rad/m; only below the Dirac cone.
    pub u_minus: Option<f64>,
    /// ħc/(k_B T), m.
    pub beta: f64,
    /// ħ√(v_F²q² − ω²)/(2 k_B T); only above the Dirac cone.
    pub d: Option<f64>,
    /// ħ√(v_F²q² + ξ_l²)/(2 k_B T); only on the imaginary axis.
    pub d_l: Option<f64>,
}

impl ThermalKernelParams {
    pub fn real_axis(p: SpectralPoint, params: &PhysicalParams) -> Self {
        let vq = params.fermi_velocity() * p.q;
        let beta = params.beta();
        if vq <= p.omega {
            Self {
                u_minus: Some((p.omega - vq) / (2.0 * SPEED_OF_LIGHT)),
                beta,
                d: None,
                d_l: None,
            }
        } else {
            Self {
                u_minus: None,
                beta,
                d: Some(params.reduced_energy((vq * vq - p.omega * p.omega).sqrt())),
                d_l: None,
            }
        }
    }

    pub fn imag_axis(p: MatsubaraPoint, params: &PhysicalParams) -> Self {
        let vq = params.fermi_velocity() * p.q;
        Self {
            u_minus: None,
            beta: params.beta(),
            d: None,
            d_l: Some(params.reduced_energy(vq.hypot(p.xi))),
        }
    }
}

/// B(x) = x²/√(x² − v_F²q²), principal branch below the cone.
pub fn eval_b(x: f64, q: f64, params: &PhysicalParams) -> Result<Complex64> {
    let vq = params.fermi_velocity() * q;
    if x.abs() == vq {
        return Err(Error::Pole(x));
    }
    Ok(Complex64::new(x * x, 0.0) / eval_f(x, q, params))
}

/// F(x) = √(x² − v_F²q²), principal branch below the cone; F(±v_F q) = 0.
pub fn eval_f(x: f64, q: f64, params: &PhysicalParams) -> Complex64 {
    let vq = params.fermi_velocity() * q;
    let rad = (x - vq) * (x + vq);
    if rad >= 0.0 {
        Complex64::new(rad.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-rad).sqrt())
    }
}

/// 1 − √(1 − z) without cancellation.
#[inline]
pub(crate) fn one_minus_sqrt(z: f64) -> f64 {
    z / (1.0 + (1.0 - z).sqrt())
}

#[inline]
pub(crate) fn fermi(x: f64) -> f64 {
    // 1/(e^x + 1) for x ≥ 0 without overflow
    let e = (-x).exp();
    e / (1.0 + e)
}
