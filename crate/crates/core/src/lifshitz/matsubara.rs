use super::{integrate_fallible, ordered_sum, Polarization, PressureValue, SummationConfig};
use crate::error::{Error, Result};
use crate::fresnel::r_pair_imag;
use crate::params::{MatsubaraPoint, PhysicalParams, BOLTZMANN, SPEED_OF_LIGHT};
use crate::response::{eps_imag_axis, ResponseConfig};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Number of Matsubara terms evaluated per parallel batch. Fixed so that
/// the set of computed terms does not depend on the thread count.
const BATCH: u32 = 8;

/// Consecutive small terms required before the sum is truncated.
const QUIET_TERMS: usize = 3;

/// Share of `rel_tol` a single neglected term may carry. The terms decay
/// geometrically with ratio e^{−4πak_BT/ħc}, so the tail is a few terms.
const TRUNCATION_SHARE: f64 = 0.1;

/// ∫ dy y² r² e^{−y}/(1 − r² e^{−y}) over y = 2aκ_l ∈ [y_l, y_l + Y].
fn term(
    l: u32,
    params: &PhysicalParams,
    pol: Polarization,
    cfg: &SummationConfig,
    rcfg: &ResponseConfig,
) -> Result<(f64, f64)> {
    let two_a = 2.0 * params.separation_m;
    let xi = params.matsubara_frequency(l);
    let y_l = two_a * xi / SPEED_OF_LIGHT;
    let f = |y: f64| -> Result<f64> {
        let q = ((y - y_l) * (y + y_l)).sqrt() / two_a;
        if q == 0.0 {
            return Ok(0.0);
        }
        let p = MatsubaraPoint { q, l, xi };
        let eps = eps_imag_axis(p, params, rcfg)?;
        let r = r_pair_imag(&eps, p)?;
        let r = match pol {
            Polarization::Tm => r.r_tm.re,
            Polarization::Te => r.r_te.re,
        };
        let x = r * r * (-y).exp();
        Ok(y * y * x / (1.0 - x))
    };
    let res = integrate_fallible(&f, y_l, y_l + cfg.q_cutoff_factor, cfg.rel_tol * 0.1, 0.0, [])?;
    Ok((res.value, res.error_estimate))
}

/// Matsubara-sum pressure of one polarization, Pa.
///
/// −(k_B T/π) Σ'_l ∫ q dq κ_l / (r⁻² e^{2aκ_l} − 1), the l = 0 term with
/// weight 1/2. The sum stops once three consecutive terms fall below a
/// tenth of `rel_tol` of the partial sum; a geometric bound on the
/// remainder is added to the error estimate.
pub fn pressure_matsubara(
    params: &PhysicalParams,
    pol: Polarization,
    cfg: &SummationConfig,
) -> Result<PressureValue> {
    params.validate()?;
    cfg.validate()?;
    if params.temperature_k <= 0.0 {
        return Err(Error::InvalidParameter(
            "the Matsubara sum needs T > 0".into(),
        ));
    }
    params.check_dirac_validity();
    let rcfg = ResponseConfig::with_rel_tol((cfg.rel_tol * 1e-2).max(1e-13));

    let mut values: Vec<f64> = Vec::new();
    let mut errors: Vec<f64> = Vec::new();
    let mut quiet = 0;
    let mut l0 = 0u32;
    'outer: loop {
        let hi = (l0 + BATCH).min(cfg.l_max_cap);
        let batch: Vec<Result<(f64, f64)>> = (l0..hi)
            .into_par_iter()
            .map(|l| term(l, params, pol, cfg, &rcfg))
            .collect();
        for (l, t) in (l0..hi).zip(batch) {
            let (v, e) = t?;
            let w = if l == 0 { 0.5 } else { 1.0 };
            values.push(w * v);
            errors.push(w * e);
            let partial = ordered_sum(values.iter().copied());
            if l > 0 && (v.abs() <= TRUNCATION_SHARE * cfg.rel_tol * partial.abs() || v == 0.0) {
                quiet += 1;
                if quiet >= QUIET_TERMS {
                    break 'outer;
                }
            } else {
                quiet = 0;
            }
        }
        if hi >= cfg.l_max_cap {
            let partial = ordered_sum(values.iter().copied());
            return Err(Error::NoConvergence {
                value: partial,
                error: values.last().copied().unwrap_or(0.0).abs(),
                lo: 0.0,
                hi: f64::from(cfg.l_max_cap),
            });
        }
        l0 = hi;
    }

    let n = values.len();
    let sum = ordered_sum(values.iter().copied());
    // remainder bound from the decay ratio of the last two terms
    let (last, prev) = (values[n - 1].abs(), values[n - 2].abs());
    let ratio = if prev > 0.0 { (last / prev).min(0.9) } else { 0.0 };
    let tail = last * ratio / (1.0 - ratio);
    let quad_err = ordered_sum(errors.iter().copied());

    let two_a = 2.0 * params.separation_m;
    let scale = -BOLTZMANN * params.temperature_k / PI / (two_a * two_a * two_a);
    Ok(PressureValue::new(
        scale * sum,
        scale.abs() * (quad_err + tail) + 4.0 * f64::EPSILON * (scale * sum).abs(),
    ))
}
