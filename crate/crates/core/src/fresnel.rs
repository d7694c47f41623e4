//! Reflection coefficients of a two-dimensional sheet in vacuum.
//!
//! Real-axis coefficients are written with k₀z = √(ω²/c² − q²) for
//! propagating waves and k₀z = iκ, κ = √(q² − ω²/c²), for evanescent ones.
//! At q = 0 the permittivity forms are evaluated as the explicit limits of
//! the closed expressions; the conductivity form gives the physical normal
//! incidence values there.

use crate::error::{Error, Result};
use crate::params::{MatsubaraPoint, SpectralPoint, SPEED_OF_LIGHT};
use crate::response::{Conductivity, PermittivityPair};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Relative size of an imaginary part still accepted as roundoff on the
/// imaginary frequency axis.
pub const REALNESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Real,
    Imaginary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub r_tm: Complex64,
    pub r_te: Complex64,
    pub axis: Axis,
}

/// Normal wave-vector component k₀z.
pub fn k0z(p: SpectralPoint) -> Complex64 {
    let k0 = p.omega / SPEED_OF_LIGHT;
    let rad = (k0 - p.q) * (k0 + p.q);
    if rad >= 0.0 {
        Complex64::new(rad.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-rad).sqrt())
    }
}

/// r_TM = (ε_L − 1)k₀z / (iq + (ε_L − 1)k₀z). Equals 1 exactly where ε_L is
/// infinite (on the Dirac cone). Where the denominator vanishes (ε_L = 1 at
/// q = 0, or q = ω/c = 0) the numerator does too and 0 is returned.
pub fn r_tm_real(eps: &PermittivityPair, p: SpectralPoint) -> Result<Complex64> {
    let x = eps.eps_l - 1.0;
    if !x.is_finite() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let kz = k0z(p);
    let den = Complex64::new(0.0, p.q) + x * kz;
    if den == Complex64::new(0.0, 0.0) {
        return Ok(den);
    }
    Ok(x * kz / den)
}

/// r_TE = −R / (ic²q k₀z + R) with R = ω²(ε_Tr − 1); at q = 0 this is −1
/// for R ≠ 0 and 0 otherwise.
pub fn r_te_real(eps: &PermittivityPair, p: SpectralPoint) -> Result<Complex64> {
    let r = eps.regularized_tr;
    let c2 = SPEED_OF_LIGHT * SPEED_OF_LIGHT;
    let den = Complex64::new(0.0, c2 * p.q) * k0z(p) + r;
    if den == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(-r / den)
}

pub fn r_pair_real(eps: &PermittivityPair, p: SpectralPoint) -> Result<ReflectionPair> {
    Ok(ReflectionPair {
        r_tm: r_tm_real(eps, p)?,
        r_te: r_te_real(eps, p)?,
        axis: Axis::Real,
    })
}

/// Reflection from the sheet conductivities:
/// r_TM = 2πσ_L cosθ/(c + 2πσ_L cosθ), r_TE = −2πσ_Tr/(c cosθ + 2πσ_Tr),
/// cosθ = c k₀z/ω.
pub fn r_from_conductivity(sigma: &Conductivity, p: SpectralPoint) -> Result<ReflectionPair> {
    if !(p.omega > 0.0) {
        return Err(Error::InvalidParameter("omega must be > 0".into()));
    }
    let cos = k0z(p) * (SPEED_OF_LIGHT / p.omega);
    let a = 2.0 * PI * sigma.longitudinal * cos;
    let b = 2.0 * PI * sigma.transverse;
    let den_te = SPEED_OF_LIGHT * cos + b;
    Ok(ReflectionPair {
        r_tm: a / (SPEED_OF_LIGHT + a),
        r_te: if den_te == Complex64::new(0.0, 0.0) { 0.0.into() } else { -b / den_te },
        axis: Axis::Real,
    })
}

fn real_part(z: Complex64) -> Result<f64> {
    if z.im.abs() > REALNESS_TOL * z.norm() {
        return Err(Error::NotReal {
            imag: z.im,
            magnitude: z.norm(),
        });
    }
    Ok(z.re)
}

/// Reflection at the Matsubara frequency ξ_l with κ = √(q² + ξ²/c²):
/// r_TM = (ε_L − 1)κ/(q + (ε_L − 1)κ), r_TE = −R/(c²qκ + R), R = ξ²(ε_Tr − 1).
pub fn r_pair_imag(eps: &PermittivityPair, p: MatsubaraPoint) -> Result<ReflectionPair> {
    if !(p.q > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "imaginary-axis reflection needs q > 0, got {}",
            p.q
        )));
    }
    let x = real_part(eps.eps_l - 1.0)?;
    let r = real_part(eps.regularized_tr)?;
    let kappa = p.q.hypot(p.xi / SPEED_OF_LIGHT);
    let r_tm = x * kappa / (p.q + x * kappa);
    let r_te = -r / (SPEED_OF_LIGHT * SPEED_OF_LIGHT * p.q * kappa + r);
    Ok(ReflectionPair {
        r_tm: r_tm.into(),
        r_te: r_te.into(),
        axis: Axis::Imaginary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{PhysicalParams, FINE_STRUCTURE};
    use crate::response::{eps_real_axis, eps_to_conductivity, ResponseConfig};

    fn params() -> PhysicalParams {
        PhysicalParams::new(300.0, 1e-6).unwrap()
    }

    fn pair(q: f64, omega: f64) -> (SpectralPoint, PermittivityPair) {
        let p = SpectralPoint::new(q, omega).unwrap();
        (p, eps_real_axis(p, &params(), &ResponseConfig::default()).unwrap())
    }

    #[test]
    fn conductivity_and_permittivity_forms_agree() {
        let omega = 6e13;
        let k0 = omega / SPEED_OF_LIGHT;
        let v = params().fermi_velocity();
        for q in [0.3 * k0, 0.999 * k0, 1.5 * k0, 50.0 * k0, 0.8 * omega / v, 3.0 * omega / v] {
            let (p, e) = pair(q, omega);
            let a = r_pair_real(&e, p).unwrap();
            let s = eps_to_conductivity(&e, q, omega).unwrap();
            let b = r_from_conductivity(&s, p).unwrap();
            assert!((a.r_tm - b.r_tm).norm() <= 1e-12 * a.r_tm.norm().max(1e-300), "{q}");
            assert!((a.r_te - b.r_te).norm() <= 1e-12 * a.r_te.norm().max(1e-300), "{q}");
        }
    }

    #[test]
    fn continuous_across_light_line() {
        let omega = 6e13;
        let k0 = omega / SPEED_OF_LIGHT;
        let (p0, e0) = pair(k0, omega);
        let at = r_pair_real(&e0, p0).unwrap();
        assert_eq!(at.r_tm, Complex64::new(0.0, 0.0));
        assert!((at.r_te + 1.0).norm() < 1e-12);
        // the jump closes like the square root of the distance to the light line
        let jump = |d: f64| {
            let (pb, eb) = pair(k0 * (1.0 - d), omega);
            let (pa, ea) = pair(k0 * (1.0 + d), omega);
            let b = r_pair_real(&eb, pb).unwrap();
            let a = r_pair_real(&ea, pa).unwrap();
            (a.r_tm - b.r_tm).norm().max((a.r_te - b.r_te).norm())
        };
        let (j1, j2) = (jump(1e-10), jump(1e-14));
        assert!(j2 < 1e-4 && j2 < j1 / 50.0, "{j1} {j2}");
    }

    #[test]
    fn normal_incidence_universal_limit() {
        // T = 0, q = 0: r = ∓πα/2/(1 + πα/2)
        let s = FINE_STRUCTURE * SPEED_OF_LIGHT / 4.0;
        let sigma = Conductivity {
            longitudinal: s.into(),
            transverse: s.into(),
        };
        let r = r_from_conductivity(&sigma, SpectralPoint::new(0.0, 1e15).unwrap()).unwrap();
        let x = PI * FINE_STRUCTURE / 2.0;
        assert!((r.r_tm.re - x / (1.0 + x)).abs() < 1e-15);
        assert!((r.r_te.re + x / (1.0 + x)).abs() < 1e-15);
        let p0 = SpectralPoint::new(0.0, 1e15).unwrap();
        let vac = PermittivityPair::vacuum();
        assert_eq!(r_tm_real(&vac, p0).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(r_te_real(&vac, p0).unwrap(), Complex64::new(0.0, 0.0));
        let mut e = vac;
        e.eps_l = Complex64::new(1.5, 0.2);
        e.regularized_tr = Complex64::new(3.0, 1.0);
        assert_eq!(r_tm_real(&e, p0).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(r_te_real(&e, p0).unwrap(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn imaginary_axis_rejects_complex_input() {
        let mut e = PermittivityPair::vacuum();
        e.eps_l = Complex64::new(2.0, 1e-3);
        let p = MatsubaraPoint { q: 1e6, l: 1, xi: 1e13 };
        assert!(matches!(r_pair_imag(&e, p), Err(Error::NotReal { .. })));
        e.eps_l = Complex64::new(2.0, 1e-14);
        let r = r_pair_imag(&e, p).unwrap();
        assert!(r.r_tm.re > 0.0 && r.r_tm.re < 1.0);
        assert_eq!(r.r_te, Complex64::new(0.0, 0.0));
    }
}
