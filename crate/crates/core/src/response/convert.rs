use super::PermittivityPair;
use crate::error::{Error, Result};
use crate::params::{HBAR, SPEED_OF_LIGHT};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Polarization tensor components Π₀₀ and Π = k²Π_tr − q²Π₀₀ (Gaussian units, 1/m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationComponents {
    pub pi00: Complex64,
    pub pi: Complex64,
}

/// Sheet conductivities, longitudinal and transverse, in m/s (Gaussian units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conductivity {
    pub longitudinal: Complex64,
    pub transverse: Complex64,
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("q must be > 0, got {q}")))
    }
}

/// Π₀₀ = 2ħq(ε_L − 1)/c², Π = −2ħq ω²(ε_Tr − 1)/c², in units where the
/// polarization carries dimensions of ħ/length.
pub fn eps_to_polarization(eps: &PermittivityPair, q: f64) -> Result<PolarizationComponents> {
    check_q(q)?;
    let k = 2.0 * HBAR * q / (SPEED_OF_LIGHT * SPEED_OF_LIGHT);
    Ok(PolarizationComponents {
        pi00: k * (eps.eps_l - 1.0),
        pi: -k * eps.regularized_tr,
    })
}

/// Inverse of [`eps_to_polarization`]. `freq_sq` is ω² on the real axis and
/// ξ² on the imaginary axis.
pub fn polarization_to_eps(
    pol: &PolarizationComponents,
    q: f64,
    freq_sq: f64,
) -> Result<(Complex64, Complex64)> {
    check_q(q)?;
    if !(freq_sq > 0.0) {
        return Err(Error::InvalidParameter("frequency must be > 0".into()));
    }
    let k = 2.0 * HBAR * q / (SPEED_OF_LIGHT * SPEED_OF_LIGHT);
    Ok((1.0 + pol.pi00 / k, 1.0 - pol.pi / (k * freq_sq)))
}

/// σ = ω(ε − 1)/(2πiq) for both components.
pub fn eps_to_conductivity(eps: &PermittivityPair, q: f64, omega: f64) -> Result<Conductivity> {
    check_q(q)?;
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter("omega must be > 0".into()));
    }
    let den = Complex64::new(0.0, 2.0 * PI * q);
    Ok(Conductivity {
        longitudinal: omega * (eps.eps_l - 1.0) / den,
        transverse: eps.regularized_tr / (omega * den),
    })
}

/// ε = 1 + 2πiqσ/ω; returns (ε_L, ε_Tr).
pub fn conductivity_to_eps(s: &Conductivity, q: f64, omega: f64) -> Result<(Complex64, Complex64)> {
    check_q(q)?;
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter("omega must be > 0".into()));
    }
    let f = Complex64::new(0.0, 2.0 * PI * q / omega);
    Ok((1.0 + f * s.longitudinal, 1.0 + f * s.transverse))
}
