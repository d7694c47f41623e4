use super::{fermi, PermittivityPair, ResponseConfig, ResponseParts};
use crate::error::Result;
use crate::params::{PhysicalParams, SpectralPoint};
use crate::quadrature::{IntegrationProblem, Singularity};
use num_complex::Complex64;
use std::f64::consts::PI;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO2: [Complex64; 2] = [Complex64 { re: 0.0, im: 0.0 }; 2];

/// Thermal integrals ∫ f · (L bracket, T bracket) with their combined error.
struct Thermal {
    l: Complex64,
    t: Complex64,
    error: f64,
}

/// (1 − √(1 − ν²/y²), 1/√(1 − ν²/y²) − 1) for y ≥ ν, cancellation free.
fn h_k(y: f64, nu: f64) -> (f64, f64) {
    let z = (nu / y) * (nu / y);
    let r = ((y - nu) * (y + nu)).max(0.0).sqrt() / y;
    let h = z / (1.0 + r);
    (h, h / r)
}

/// Bracket pair of the thermal integrals below the Dirac cone, ν = v_F q/ω < 1,
/// in the variable d = 2cu/ω − 1, whose singular points ±ν are then exact.
fn bracket_below(d: f64, nu: f64, s: f64, h0: f64) -> [Complex64; 2] {
    let y1 = d + 2.0;
    let (h1, k1) = h_k(y1, nu);
    if d.abs() > nu {
        // both roots real; the λ = −1 term enters with the sign of −d
        let sg = if d < 0.0 { 1.0 } else { -1.0 };
        let y2 = d.abs();
        let (h2, k2) = h_k(y2, nu);
        if !k2.is_finite() {
            return ZERO2;
        }
        let l = (-2.0 * h0 + y1 * h1 + sg * y2 * h2) / (2.0 * s);
        let t = h0 - 0.5 * s * (y1 * k1 + sg * y2 * k2);
        [l.into(), t.into()]
    } else {
        // λ = −1 root on the lower branch √(d² − ν²) = −i√(ν² − d²)
        let r = ((nu - d) * (nu + d)).sqrt();
        if r == 0.0 {
            return ZERO2;
        }
        let l = Complex64::new(-2.0 * h0 - d + y1 * h1, -r) / (2.0 * s);
        // 1 − s y₁(1 + k₁)/2 with s = 1 − h₀, y₁ = 2 + d, expanded so that
        // the leading 1 cancels analytically
        let a = (1.0 - h0) * (1.0 + k1);
        let re = h0 + h0 * k1 - k1 - 0.5 * d * a;
        let t = Complex64::new(re, 0.5 * s * d * d / r);
        [l, t]
    }
}

/// Retarded √g_λ above the cone: −iλ√|g| where g < 0.
fn sqrt_g(g: f64, lambda: f64) -> Complex64 {
    if g >= 0.0 {
        Complex64::new(g.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, -lambda * (-g).sqrt())
    }
}

/// Bracket pair above the Dirac cone, ν > 1, in w with p = √(ν² − 1).
fn bracket_above(w: f64, p: f64, w_plus: f64, w_minus: f64) -> [Complex64; 2] {
    // g_± = 1 − w² ∓ 2w/p, factored through its roots
    let g_plus = -(w - w_plus) * (w + w_minus);
    let g_minus = -(w - w_minus) * (w + w_plus);
    if g_plus == 0.0 || g_minus == 0.0 {
        return ZERO2;
    }
    if g_minus < 0.0 {
        // both radicands negative; the two large terms of each bracket are
        // combined in closed form so that nothing cancels at large w
        let a = (-g_plus).sqrt();
        let b = (-g_minus).sqrt();
        let l = Complex64::new(1.0, 2.0 * w / (p * (a + b)));
        let u = (p * w + 1.0).powi(2) * b;
        let v = (p * w - 1.0).powi(2) * a;
        let pw2 = p * w * w;
        let num = w * (4.0 * p * p * pw2 * w * w - 16.0 * pw2 - 8.0 * p * p * pw2 - 8.0 * p - 4.0 / p);
        let t = Complex64::new(1.0, -0.5 * num / ((u + v) * a * b));
        return [l, t];
    }
    let sp = sqrt_g(g_plus, 1.0);
    let sm = sqrt_g(g_minus, -1.0);
    let l = Complex64::new(1.0, 0.0) - 0.5 * (sp + sm);
    let t = Complex64::new(1.0, 0.0)
        - 0.5 * ((p * w + 1.0).powi(2) / sp + (p * w - 1.0).powi(2) / sm);
    [l, t]
}

/// Integrates the bracket pair over [lo, hi]. `scale` is the size of the
/// zero-temperature term in bracket units; errors far below it are ignored.
fn integrate_brackets(
    f: impl Fn(f64) -> [Complex64; 2],
    lo: f64,
    hi: f64,
    singular: &[f64],
    tail: f64,
    scale: f64,
    cfg: &ResponseConfig,
) -> Result<Thermal> {
    let mut sings: Vec<Singularity> = singular
        .iter()
        .filter(|&&x| x > lo && x < hi)
        .map(|&x| Singularity::inverse_sqrt(x))
        .collect();
    // decades beyond the last root keep long ranges from being bisected blindly
    let mut x = 10.0 * singular.iter().fold(1.0f64, |m, &v| m.max(v));
    while x < hi {
        sings.push(Singularity::breakpoint(x));
        x *= 10.0;
    }
    let res = IntegrationProblem::new(f, lo, hi)
        .rel_tol(cfg.rel_tol)
        .abs_tol((cfg.rel_tol * scale).max(1e-300))
        .max_cells(cfg.max_cells)
        .singularities(sings)
        .integrate()?
        .require_converged()?;
    Ok(Thermal {
        l: res.value[0],
        t: res.value[1],
        error: res.error_estimate + tail,
    })
}

/// Permittivities at real frequency ω and wave number q.
///
/// Zero-temperature terms are closed forms; at T = 0 the thermal parts are
/// exactly zero. Exactly on the Dirac cone q = ω/v_F, ε_L is infinite and
/// ε_Tr takes its finite one-sided limit from below.
pub fn eps_real_axis(
    p: SpectralPoint,
    params: &PhysicalParams,
    cfg: &ResponseConfig,
) -> Result<PermittivityPair> {
    params.validate()?;
    if p.q == 0.0 {
        return Ok(PermittivityPair::vacuum());
    }
    let omega = p.omega;
    let w2 = omega * omega;
    let c_over_v = 1.0 / params.vf_over_c;
    let a = params.alpha * c_over_v;
    let nu = params.fermi_velocity() * p.q / omega;
    let thermal_on = params.temperature_k > 0.0;
    let tau = if thermal_on {
        params.reduced_energy(omega)
    } else {
        f64::INFINITY
    };

    if nu == 1.0 {
        let zero = ResponseParts {
            eps_l_minus_one: Complex64::new(0.0, f64::INFINITY),
            regularized_tr: Complex64::new(0.0, 0.0),
        };
        let t_tr = if thermal_on { -4.0 * a * 2f64.ln() / tau } else { 0.0 };
        let thermal = ResponseParts {
            eps_l_minus_one: if thermal_on {
                Complex64::new(f64::INFINITY, f64::INFINITY)
            } else {
                Complex64::new(0.0, 0.0)
            },
            regularized_tr: Complex64::new(w2 * t_tr, 0.0),
        };
        return Ok(PermittivityPair::assemble(zero, thermal, w2, 0.0, 0.0));
    }

    let cutoff = cfg.fermi_cutoff;
    if nu < 1.0 {
        let s = ((1.0 - nu) * (1.0 + nu)).sqrt();
        let h0 = super::one_minus_sqrt(nu * nu);
        let zero = ResponseParts {
            eps_l_minus_one: I * (PI * a * nu / (2.0 * s)),
            regularized_tr: I * (w2 * PI * a * nu * s / 2.0),
        };
        let th = if thermal_on {
            let hi = cutoff / tau - 1.0;
            let at_hi = bracket_below(hi, nu, s, h0);
            let tail = 2.0 * at_hi[0].norm().max(at_hi[1].norm()) * fermi(cutoff) / tau;
            integrate_brackets(
                |d| {
                    let fx = fermi(tau * (d + 1.0));
                    let b = bracket_below(d, nu, s, h0);
                    [b[0] * fx, b[1] * fx]
                },
                -1.0,
                hi,
                &[-nu, nu],
                tail,
                (PI / 8.0) * nu * nu * s.min(1.0 / s),
                cfg,
            )?
        } else {
            Thermal {
                l: 0.0.into(),
                t: 0.0.into(),
                error: 0.0,
            }
        };
        let pre = 4.0 * a / nu;
        let thermal = ResponseParts {
            eps_l_minus_one: pre * th.l,
            regularized_tr: -w2 * pre * th.t,
        };
        let err = pre * th.error;
        Ok(PermittivityPair::assemble(zero, thermal, w2, err, w2 * err))
    } else {
        let pp = ((nu - 1.0) * (nu + 1.0)).sqrt();
        let zero = ResponseParts {
            eps_l_minus_one: Complex64::new(PI * a * nu / (2.0 * pp), 0.0),
            regularized_tr: Complex64::new(-w2 * PI * a * nu * pp / 2.0, 0.0),
        };
        let th = if thermal_on {
            let d = tau * pp;
            let w_plus = pp / (1.0 + nu);
            let w_minus = (1.0 + nu) / pp;
            let hi = cutoff / d;
            let at_hi = bracket_above(hi, pp, w_plus, w_minus);
            let tail = 2.0 * at_hi[0].norm().max(at_hi[1].norm()) * fermi(cutoff) / d;
            integrate_brackets(
                |w| {
                    let fw = fermi(d * w);
                    let b = bracket_above(w, pp, w_plus, w_minus);
                    [b[0] * fw, b[1] * fw]
                },
                0.0,
                hi,
                &[w_plus, w_minus],
                tail,
                (PI / 8.0) * nu * nu * (1.0 / (pp * pp)).min(1.0),
                cfg,
            )?
        } else {
            Thermal {
                l: 0.0.into(),
                t: 0.0.into(),
                error: 0.0,
            }
        };
        let pre = 4.0 * a * pp / nu;
        let thermal = ResponseParts {
            eps_l_minus_one: pre * th.l,
            regularized_tr: -w2 * pre * th.t,
        };
        let err = pre * th.error;
        Ok(PermittivityPair::assemble(zero, thermal, w2, err, w2 * err))
    }
}
