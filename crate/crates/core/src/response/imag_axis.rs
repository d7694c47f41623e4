use super::{fermi, one_minus_sqrt, PermittivityPair, ResponseConfig, ResponseParts};
use crate::error::{Error, Result};
use crate::params::{MatsubaraPoint, PhysicalParams};
use crate::quadrature::{IntegrationProblem, Singularity};
use num_complex::Complex64;
use std::f64::consts::PI;

/// 1 − √(1 − z) for complex z, principal branch.
fn h(z: Complex64) -> Complex64 {
    z / (1.0 + (1.0 - z).sqrt())
}

/// Bracket pair of the imaginary-axis thermal integrals at ξ/Q = ε > 0.
///
/// With δ = 1 − ε, g_λ = 1 − w² − 2iλεw = (1 − iλw)²(1 − z_λ) where
/// z_λ = −2iλwδ/(1 − iλw)². Both brackets are then O(δ) sums with no
/// cancellation as ε → 1. The λ = ±1 terms are evaluated separately, so the
/// imaginary part of the result is a roundoff residue.
fn bracket(w: f64, eps: f64, delta: f64) -> [Complex64; 2] {
    let mut l = Complex64::new(0.0, 0.0);
    let mut t = Complex64::new(delta * delta, 0.0);
    for lambda in [1.0, -1.0] {
        let m = Complex64::new(1.0, -lambda * w);
        let z = Complex64::new(0.0, -2.0 * lambda * w * delta) / (m * m);
        let hz = h(z);
        let s = (1.0 - z).sqrt();
        let k = hz / s;
        l += 0.5 * m * hz;
        t += 0.5 * (-m * k + 2.0 * delta * k - delta * delta * (1.0 + k) / m);
    }
    let _ = eps;
    [l, t]
}

/// Permittivities at the Matsubara frequency ξ_l.
///
/// At l = 0 the transverse permittivity diverges; `regularized_tr`
/// = ξ²(ε_Tr − 1) stays finite and is what TE reflection uses.
pub fn eps_imag_axis(
    p: MatsubaraPoint,
    params: &PhysicalParams,
    cfg: &ResponseConfig,
) -> Result<PermittivityPair> {
    params.validate()?;
    if params.temperature_k <= 0.0 {
        return Err(Error::InvalidParameter(
            "imaginary-axis permittivity needs T > 0".into(),
        ));
    }
    let xi = p.xi;
    let xi2 = xi * xi;
    if p.q == 0.0 {
        return Ok(PermittivityPair::vacuum());
    }
    let a = params.alpha / params.vf_over_c;
    let vq = params.fermi_velocity() * p.q;
    let big_q = vq.hypot(xi);
    let q2 = big_q * big_q;
    let rho = vq / big_q;
    let eps = xi / big_q;
    let d = params.reduced_energy(big_q);
    let hi = cfg.fermi_cutoff / d;

    let zero = ResponseParts {
        eps_l_minus_one: Complex64::new(PI * a * rho / 2.0, 0.0),
        regularized_tr: Complex64::new(q2 * PI * a * rho / 2.0, 0.0),
    };

    let (il, it, err) = if xi == 0.0 {
        // real kernels; beyond w = 1 the L bracket is 1 and the T bracket 0
        let top = hi.min(1.0);
        let sing = (top == 1.0).then(|| Singularity::inverse_sqrt(1.0));
        let res = IntegrationProblem::new(
            |w: f64| {
                let fw = fermi(d * w);
                let r = ((1.0 - w) * (1.0 + w)).sqrt();
                let t = if r > 0.0 { w * w / r } else { 0.0 };
                [fw * one_minus_sqrt(w * w), fw * t]
            },
            0.0,
            top,
        )
        .rel_tol(cfg.rel_tol)
        .abs_tol(1e-300)
        .max_cells(cfg.max_cells)
        .singularities(sing)
        .integrate()?
        .require_converged()?;
        let beyond = (-d).exp().ln_1p() / d;
        let tail = if top < 1.0 { 2.0 * fermi(cfg.fermi_cutoff) / d } else { 0.0 };
        (
            Complex64::new(res.value[0] + beyond, 0.0),
            Complex64::new(res.value[1], 0.0),
            res.error_estimate + tail,
        )
    } else {
        let delta = rho * rho / (1.0 + eps);
        let brk = (eps < 0.1 && hi > 1.0).then(|| Singularity::breakpoint(1.0));
        let res = IntegrationProblem::new(
            |w: f64| {
                let fw = fermi(d * w);
                let b = bracket(w, eps, delta);
                [b[0] * fw, b[1] * fw]
            },
            0.0,
            hi,
        )
        .rel_tol(cfg.rel_tol)
        .abs_tol(1e-300)
        .max_cells(cfg.max_cells)
        .singularities(brk)
        .integrate()?
        .require_converged()?;
        let at_hi = bracket(hi, eps, delta);
        let tail = 2.0 * at_hi[0].norm().max(at_hi[1].norm()) * fermi(cfg.fermi_cutoff) / d;
        (res.value[0], res.value[1], res.error_estimate + tail)
    };

    let pre = 4.0 * a / rho;
    let thermal = ResponseParts {
        eps_l_minus_one: pre * il,
        regularized_tr: -q2 * pre * it,
    };
    let e = pre * err;
    Ok(PermittivityPair::assemble(zero, thermal, xi2, e, q2 * e))
}
