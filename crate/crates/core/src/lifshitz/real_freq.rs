use super::{integrate_fallible, Polarization, PressureValue, SummationConfig};
use crate::error::{Error, Result};
use crate::fresnel::{r_tm_real, r_te_real};
use crate::params::{PhysicalParams, SpectralPoint, BOLTZMANN, HBAR, SPEED_OF_LIGHT};
use crate::quadrature::{levin_u, CompensatedSum, Singularity};
use crate::response::{eps_real_axis, ResponseConfig};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Dimensionless setup shared by the real-frequency integrals.
///
/// Frequencies are measured in ω_c = c/(2a) (x = ω/ω_c), normal wave numbers
/// in 1/(2a) (y = 2aκ, K = 2ak₀z). Every pressure is then
/// −(ħ/2π²)·ω_c/(2a)³ times a dimensionless double integral.
struct Setup<'a> {
    params: &'a PhysicalParams,
    rcfg: ResponseConfig,
    pol: Polarization,
    two_a: f64,
    omega_c: f64,
    /// ħω_c/(2k_B T), so that coth(ħω/2k_BT) = coth(θx)
    theta: f64,
    /// √((c/v_F)² − 1): the Dirac cone sits at y = x·cone
    cone: f64,
}

impl<'a> Setup<'a> {
    fn new(params: &'a PhysicalParams, pol: Polarization, rel_tol: f64) -> Result<Self> {
        params.validate()?;
        if params.temperature_k <= 0.0 {
            return Err(Error::InvalidParameter(
                "real-frequency pressures need T > 0".into(),
            ));
        }
        params.check_dirac_validity();
        let two_a = 2.0 * params.separation_m;
        let omega_c = SPEED_OF_LIGHT / two_a;
        let cv = 1.0 / params.vf_over_c;
        Ok(Self {
            params,
            rcfg: ResponseConfig::with_rel_tol((rel_tol * 1e-3).clamp(1e-12, 1e-8)),
            pol,
            two_a,
            omega_c,
            theta: HBAR * omega_c / (2.0 * BOLTZMANN * params.temperature_k),
            cone: ((cv - 1.0) * (cv + 1.0)).sqrt(),
        })
    }

    fn prefactor(&self) -> f64 {
        -HBAR / (2.0 * PI * PI) * self.omega_c / self.two_a.powi(3)
    }

    fn coth(&self, x: f64) -> f64 {
        1.0 / (self.theta * x).tanh()
    }

    /// Reflection coefficient at in-plane wave number q̃/(2a) and frequency xω_c.
    fn reflection(&self, q_dimless: f64, x: f64) -> Result<Complex64> {
        let p = SpectralPoint::new(q_dimless / self.two_a, x * self.omega_c)?;
        let eps = eps_real_axis(p, self.params, &self.rcfg)?;
        match self.pol {
            Polarization::Tm => r_tm_real(&eps, p),
            Polarization::Te => r_te_real(&eps, p),
        }
    }
}

/// TM or TE evanescent-wave pressure with its split at the Dirac cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvanescentPressure {
    pub total: PressureValue,
    /// ω/c < q ≤ ω/v_F
    pub plasmonic: PressureValue,
    /// q > ω/v_F
    pub deep: PressureValue,
}

/// Scan points per plasmonic interval, geometric in y.
const RESONANCE_SCAN: usize = 64;
/// Lowest scanned y relative to the top of the interval.
const RESONANCE_SCAN_DEPTH: f64 = 1e-7;
/// Resonances narrower than this fraction of their position are taken in
/// the zero-width limit.
const RESOLVABLE_WIDTH: f64 = 1e-6;

/// A zero of Re G on the real y axis, G = e^y r⁻² − 1, i.e. a coupled
/// surface mode. Near it y² Im(1/G) is a Lorentzian of half-width `width`.
#[derive(Debug, Clone, Copy)]
struct Resonance {
    at: f64,
    width: f64,
    /// ∫ over the resonance in the zero-width limit
    weight: f64,
}

fn bisect_fallible(
    f: &dyn Fn(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
) -> Result<f64> {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if !(m > a && m < b) || (b - a) <= 1e-14 * m {
            return Ok(m);
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Locates the resonances on (0, top) and returns them together with a
/// rough magnitude of ∫|y² Im(1/G)| dy from the scan.
fn resonances(g: &dyn Fn(f64) -> Result<Complex64>, top: f64) -> Result<(Vec<Resonance>, f64)> {
    let n = RESONANCE_SCAN;
    let ys: Vec<f64> = (0..n)
        .map(|i| top * RESONANCE_SCAN_DEPTH.powf(1.0 - i as f64 / (n - 1) as f64))
        .collect();
    let vals = ys.iter().map(|&y| g(y)).collect::<Result<Vec<_>>>()?;
    let mut scale = 0.0;
    let mut found = Vec::new();
    for i in 0..n - 1 {
        let (y0, y1) = (ys[i], ys[i + 1]);
        // r = 0 on the light line makes G infinite there
        if !(vals[i].is_finite() && vals[i + 1].is_finite()) {
            continue;
        }
        scale += (y1 - y0) * (y0 * y0 * (1.0 / vals[i]).im).abs();
        let (g0, g1) = (vals[i].re, vals[i + 1].re);
        if g0 == 0.0 || g0.signum() == g1.signum() {
            continue;
        }
        let re = |y: f64| g(y).map(|v| v.re);
        let at = bisect_fallible(&re, y0, y1, g0)?;
        let h = 1e-6 * at;
        let slope = (re(at + h)? - re(at - h)?) / (2.0 * h);
        let im = g(at)?.im;
        let width = (im / slope).abs();
        // −∫ y² Im G/((G'(y − y_p))² + (Im G)²) dy → −π y_p² sgn(Im G)/|G'|
        let weight = -PI * at * at * im.signum() / slope.abs();
        scale += weight.abs();
        found.push(Resonance { at, width, weight });
    }
    Ok((found, scale))
}

/// ∫_lo^hi f with every resonance inside cut out and integrated in the
/// variable φ, y = y_p + γ tan φ, or in its zero-width limit.
fn integrate_across_resonances(
    f: &dyn Fn(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    res: &[Resonance],
    rel_tol: f64,
    abs_tol: f64,
    end_singularity: Option<f64>,
) -> Result<f64> {
    let mut total = CompensatedSum::new();
    let mut start = lo;
    for (k, r) in res.iter().enumerate() {
        let next = res.get(k + 1).map_or(hi, |n| n.at);
        let prev = if k == 0 { lo } else { res[k - 1].at };
        let w = 0.3 * (r.at - prev).min(next - r.at);
        if r.width >= 0.25 * w {
            continue;
        }
        total.add(integrate_fallible(f, start, r.at - w, rel_tol, abs_tol, [])?.value);
        if r.width > RESOLVABLE_WIDTH * r.at {
            let phi = (w / r.width).atan();
            let mapped = |p: f64| -> Result<f64> {
                let c = p.cos();
                f(r.at + r.width * p.tan()).map(|v| v * r.width / (c * c))
            };
            let sing = [Singularity::breakpoint(0.0)];
            total.add(integrate_fallible(&mapped, -phi, phi, rel_tol, abs_tol, sing)?.value);
        } else {
            // Lorentzian share inside the window; the tails are in the pieces
            total.add(r.weight * (2.0 / PI) * (w / r.width).atan());
        }
        start = r.at + w;
    }
    let sing = end_singularity
        .filter(|&e| e > start && e <= hi)
        .map(Singularity::inverse_sqrt);
    total.add(integrate_fallible(f, start, hi, rel_tol, abs_tol, sing)?.value);
    Ok(total.value())
}

/// Inner y-integrals of the evanescent pressure at frequency xω_c:
/// ∫ dy y² Im[r² e^{−y}/(1 − r² e^{−y})] below and above the Dirac cone.
fn evanescent_inner(s: &Setup, x: f64, y_max: f64, rel_tol: f64) -> Result<[f64; 2]> {
    let g = |y: f64| -> Result<Complex64> {
        let r = s.reflection(y.hypot(x), x)?;
        Ok(y.exp() / (r * r) - 1.0)
    };
    let f = |y: f64| -> Result<f64> {
        if y == 0.0 {
            return Ok(0.0);
        }
        let r = s.reflection(y.hypot(x), x)?;
        let e = r * r * (-y).exp();
        Ok(y * y * (e / (1.0 - e)).im)
    };
    let y_v = x * s.cone;
    let mut out = [0.0; 2];
    let plasmonic_top = y_v.min(y_max);
    if plasmonic_top > 0.0 {
        let (res, scale) = resonances(&g, plasmonic_top)?;
        let edge = (y_v <= y_max).then_some(y_v);
        out[0] = integrate_across_resonances(
            &f,
            0.0,
            plasmonic_top,
            &res,
            rel_tol,
            rel_tol * 1e-2 * scale,
            edge,
        )?;
    }
    if y_v < y_max {
        let sing = [Singularity::inverse_sqrt(y_v)];
        out[1] = integrate_fallible(&f, y_v, y_max, rel_tol, 0.0, sing)?.value;
    }
    Ok(out)
}

/// Evanescent-wave pressure, Pa, split at q = ω/v_F.
///
/// −(ħ/2π²) ∫ dω coth(ħω/2k_BT) ∫_{ω/c}^∞ q dq κ Im[r⁻² e^{2aκ} − 1]⁻¹ with
/// κ = √(q² − ω²/c²). The inner integral vanishes linearly at ω → 0, so the
/// coth pole is integrable; the strip below `singularity_offset`·k_BT/ħ is
/// estimated from the value at its upper edge.
///
/// Coupled surface modes make the inner integrand a narrow Lorentzian at low
/// frequency. Each is located and integrated in an angular variable, or in
/// its zero-width limit when narrower than the evaluation noise.
///
/// TM only: for TE, r → −1 on a band of width ∝ ω above the light line, so
/// the evanescent frequency integral grows without bound; only its sum with
/// the propagating part is finite.
pub fn pressure_evanescent(
    params: &PhysicalParams,
    pol: Polarization,
    cfg: &SummationConfig,
) -> Result<EvanescentPressure> {
    cfg.validate()?;
    if pol == Polarization::Te {
        return Err(Error::InvalidParameter(
            "the evanescent/propagating split is available for TM only".into(),
        ));
    }
    let s = Setup::new(params, pol, cfg.real_rel_tol)?;
    let y_max = cfg.q_cutoff_factor;
    let inner_tol = cfg.real_rel_tol * 0.1;
    let g = |x: f64| -> Result<[f64; 2]> {
        let c = s.coth(x);
        let [a, b] = evanescent_inner(&s, x, y_max, inner_tol)?;
        Ok([c * a, c * b])
    };

    let x_min = cfg.singularity_offset / (2.0 * s.theta);
    // breakpoints: thermal scale, end of the deep region, a few decades up
    let x_thermal = 1.0 / s.theta;
    let x_deep = y_max / s.cone;
    let mut breaks: Vec<f64> = vec![x_thermal, x_deep, 10.0 * x_thermal, 1.0, 10.0, 100.0];
    breaks.retain(|&b| b > x_min);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let sing = breaks.iter().map(|&b| Singularity::breakpoint(b));
    let res = integrate_fallible(&g, x_min, f64::INFINITY, cfg.real_rel_tol, 0.0, sing)?;
    let below = g(x_min)?;
    let pre = s.prefactor();
    let err_share = |v: f64, total: f64| {
        if total != 0.0 {
            res.error_estimate * (v / total).abs()
        } else {
            res.error_estimate
        }
    };
    let norm = res.value[0].abs() + res.value[1].abs();
    let part = |i: usize| {
        let v = res.value[i] + x_min * below[i];
        PressureValue::new(
            pre * v,
            pre.abs() * (err_share(res.value[i].abs(), norm) + (x_min * below[i]).abs()),
        )
    };
    let plasmonic = part(0);
    let deep = part(1);
    Ok(EvanescentPressure {
        total: PressureValue::new(
            plasmonic.value + deep.value,
            plasmonic.error + deep.error,
        ),
        plasmonic,
        deep,
    })
}

/// Propagating-wave pressure as the Matsubara pressure minus the evanescent one.
pub fn pressure_propagating_residual(
    matsubara: PressureValue,
    evanescent: PressureValue,
) -> PressureValue {
    PressureValue::new(
        matsubara.value - evanescent.value,
        matsubara.error + evanescent.error,
    )
}

/// Partial sums handed to the accelerator.
const MAX_HALF_CELLS: usize = 64;
const MIN_HALF_CELLS: usize = 24;

/// Propagating-wave pressure from the oscillatory real-frequency integral, Pa.
///
/// The frequency and normal wave-number integrals are exchanged so that the
/// outer variable K = 2ak₀z carries all oscillation. Up to K₀ the full
/// integrand is integrated directly. Beyond K₀ the denominator is expanded in
/// powers of r² e^{iK}; the first two harmonics are integrated over
/// half-period cells and their partial sums extrapolated. The remaining
/// harmonics enter the error estimate.
///
/// Only TM is supported: r_TE → −1 at grazing incidence for any conductivity,
/// which makes the exchanged TE frequency integral diverge.
pub fn pressure_propagating_direct(
    params: &PhysicalParams,
    pol: Polarization,
    cfg: &SummationConfig,
) -> Result<PressureValue> {
    cfg.validate()?;
    if pol == Polarization::Te {
        return Err(Error::InvalidParameter(
            "the direct propagating-wave path is available for TM only".into(),
        ));
    }
    let s = Setup::new(params, pol, cfg.direct_rel_tol)?;
    let tol = cfg.direct_rel_tol;
    let inner_tol = (tol * 1e-2).max(1e-8);

    // t = cosθ = ck₀z/ω ∈ (0, 1]; ω = ω_c K/t, q̃ = K√(1 − t²)/t
    let r_at = |k: f64, t: f64| -> Result<Complex64> {
        let q = k * ((1.0 - t) * (1.0 + t)).sqrt() / t;
        s.reflection(q, k / t)
    };

    // full integrand: K³ ∫ dt coth/t² · Im{−i r² e^{iK}/(1 − r² e^{iK})}/K
    let resummed = |k: f64| -> Result<f64> {
        if k == 0.0 {
            return Ok(0.0);
        }
        let phase = Complex64::from_polar(1.0, k);
        let inner = integrate_fallible(
            &|t: f64| -> Result<f64> {
                if t == 0.0 {
                    return Ok(0.0);
                }
                let r = r_at(k, t)?;
                let e = r * r * phase;
                let v = Complex64::new(0.0, -1.0) * e / (1.0 - e);
                Ok(s.coth(k / t) / (t * t) * v.im)
            },
            0.0,
            1.0,
            inner_tol,
            0.0,
            [],
        )?;
        Ok(k * k * k * inner.value)
    };

    // g_n(K) = ∫ dt coth(θK/t) r^{2n}/t², n = 1, 2
    let harmonics = |k: f64| -> Result<[Complex64; 2]> {
        let res = integrate_fallible(
            &|t: f64| -> Result<[Complex64; 2]> {
                if t == 0.0 {
                    return Ok([Complex64::new(0.0, 0.0); 2]);
                }
                let r2 = r_at(k, t)?.powi(2);
                let w = s.coth(k / t) / (t * t);
                Ok([r2 * w, r2 * r2 * w])
            },
            0.0,
            1.0,
            inner_tol,
            0.0,
            [],
        )?;
        Ok(res.value)
    };

    // K₀: a multiple of π beyond which ω > 10 k_B T/ħ everywhere
    let k_thermal = 5.0 / s.theta;
    let k0 = PI * (k_thermal / PI).ceil().max(2.0);

    let breaks = (1..(k0 / PI).round() as usize).map(|j| Singularity::breakpoint(j as f64 * PI));
    let head = integrate_fallible(&resummed, 0.0, k0, tol * 0.1, 0.0, breaks)?;

    // half-period cells of the second harmonic; pairs of them are
    // half-period cells of the first
    let h = PI / 2.0;
    let cell = |j: usize| -> Result<[f64; 2]> {
        let lo = k0 + j as f64 * h;
        let res = integrate_fallible(
            &|k: f64| -> Result<[f64; 2]> {
                let g = harmonics(k)?;
                let k3 = k * k * k;
                let m = Complex64::new(0.0, -1.0);
                Ok([
                    k3 * (m * Complex64::from_polar(1.0, k) * g[0]).im,
                    k3 * (m * Complex64::from_polar(1.0, 2.0 * k) * g[1]).im,
                ])
            },
            lo,
            lo + h,
            inner_tol,
            0.0,
            [],
        )?;
        Ok(res.value)
    };

    let mut sums1 = Vec::new();
    let mut sums2 = Vec::new();
    let mut acc1 = CompensatedSum::new();
    let mut acc2 = CompensatedSum::new();
    let mut pending1 = 0.0;
    let mut result = None;
    for j in 0..MAX_HALF_CELLS {
        let [c1, c2] = cell(j)?;
        acc2.add(c2);
        sums2.push(acc2.value());
        pending1 += c1;
        if j % 2 == 1 {
            acc1.add(pending1);
            sums1.push(acc1.value());
            pending1 = 0.0;
        }
        if j + 1 >= MIN_HALF_CELLS && j % 2 == 1 {
            let e1 = levin_u(&sums1)?;
            let e2 = levin_u(&sums2)?;
            let total = head.value + e1.value + e2.value;
            let err = e1.error + e2.error;
            if err <= 0.3 * tol * total.abs() {
                result = Some((e1, e2));
                break;
            }
            result = Some((e1, e2));
        }
    }
    let (e1, e2) = result.ok_or_else(|| Error::Acceleration("no partial sums".into()))?;
    let total = head.value + e1.value + e2.value;
    if e1.error + e2.error > tol * total.abs() {
        return Err(Error::Acceleration(format!(
            "cell sums did not stabilize: estimate {total:e}, spread {:e}",
            e1.error + e2.error
        )));
    }
    // neglected harmonics n ≥ 3 shrink geometrically by about |g₂/g₁|
    let g = harmonics(k0)?;
    let ratio = if g[0].norm() > 0.0 { (g[1].norm() / g[0].norm()).min(0.5) } else { 0.0 };
    let truncation = e2.value.abs() * ratio / (1.0 - ratio);

    let pre = s.prefactor();
    let error = head.error_estimate + e1.error + e2.error + truncation;
    Ok(PressureValue::new(pre * total, pre.abs() * error))
}
