//! Casimir pressure between two graphene sheets.
//!
//! [`pressure_matsubara`] sums over imaginary Matsubara frequencies and is the
//! production path. The real-frequency representation is split into
//! evanescent waves ([`pressure_evanescent`]) and propagating waves, the
//! latter obtained either as a residual ([`pressure_propagating_residual`]) or
//! from the oscillatory integral directly ([`pressure_propagating_direct`],
//! validation grade).

mod matsubara;
mod real_freq;

pub use matsubara::pressure_matsubara;
pub use real_freq::{
    pressure_evanescent, pressure_propagating_direct, pressure_propagating_residual,
    EvanescentPressure,
};

use crate::error::{Error, Result};
use crate::params::{PhysicalParams, BOLTZMANN};
use crate::quadrature::{
    CompensatedSum, IntegrationProblem, IntegrationResult, QuadValue, Singularity,
};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

pub const ZETA_3: f64 = 1.2020569031595943;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Polarization {
    #[serde(rename = "TM")]
    Tm,
    #[serde(rename = "TE")]
    Te,
}

impl std::fmt::Display for Polarization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Polarization::Tm => "TM",
            Polarization::Te => "TE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummationConfig {
    /// Relative tolerance of the Matsubara pressures.
    pub rel_tol: f64,
    /// Relative tolerance of the real-frequency integrals.
    pub real_rel_tol: f64,
    /// Relative tolerance of the oscillatory propagating-wave integral.
    pub direct_rel_tol: f64,
    pub l_max_cap: u32,
    /// Upper limit of 2aκ in the wave-number integrals.
    pub q_cutoff_factor: f64,
    /// Lower frequency limit of the real-frequency integrals in units of
    /// k_B T/ħ; the part below is bounded from the O(ω) behavior.
    pub singularity_offset: f64,
}

impl Default for SummationConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-7,
            real_rel_tol: 1e-4,
            direct_rel_tol: 1e-2,
            l_max_cap: 100_000,
            q_cutoff_factor: 50.0,
            singularity_offset: 1e-9,
        }
    }
}

impl SummationConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rel_tol", self.rel_tol),
            ("real_rel_tol", self.real_rel_tol),
            ("direct_rel_tol", self.direct_rel_tol),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        if !(self.q_cutoff_factor >= 20.0 && self.q_cutoff_factor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "q_cutoff_factor must be >= 20, got {}",
                self.q_cutoff_factor
            )));
        }
        if !(self.singularity_offset > 0.0 && self.singularity_offset < 1e-3) {
            return Err(Error::InvalidParameter(format!(
                "singularity_offset must lie in (0, 1e-3), got {}",
                self.singularity_offset
            )));
        }
        if self.l_max_cap == 0 {
            return Err(Error::InvalidParameter("l_max_cap must be positive".into()));
        }
        Ok(())
    }
}

/// A pressure in Pa with its absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PressureValue {
    pub value: f64,
    pub error: f64,
}

impl PressureValue {
    pub fn new(value: f64, error: f64) -> Self {
        Self { value, error }
    }
}

/// −k_B T ζ(3)/(4πa³), Pa.
pub fn ideal_metal_classical(params: &PhysicalParams) -> Result<f64> {
    params.validate()?;
    if params.temperature_k <= 0.0 {
        return Err(Error::InvalidParameter("T must be > 0".into()));
    }
    let a = params.separation_m;
    Ok(-BOLTZMANN * params.temperature_k * ZETA_3 / (4.0 * PI * a * a * a))
}

/// All pressure contributions at one separation and temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PressureBreakdown {
    pub separation_m: f64,
    pub temperature_k: f64,
    pub p_tm: PressureValue,
    pub p_te: PressureValue,
    pub p_total: PressureValue,
    pub p_im: f64,
    /// Real-frequency split of the TM pressure; absent when not requested.
    pub split: Option<TmSplit>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TmSplit {
    pub evanescent: PressureValue,
    pub plasmonic: PressureValue,
    pub deep: PressureValue,
    pub propagating: PressureValue,
}

impl PressureBreakdown {
    pub fn tm_over_te(&self) -> f64 {
        self.p_tm.value / self.p_te.value
    }

    pub fn tm_over_total(&self) -> f64 {
        self.p_tm.value / self.p_total.value
    }

    pub fn total_over_im(&self) -> f64 {
        self.p_total.value / self.p_im
    }

    pub fn tm_over_im(&self) -> f64 {
        self.p_tm.value / self.p_im
    }

    pub fn tm_evan_over_im(&self) -> Option<f64> {
        self.split.map(|s| s.evanescent.value / self.p_im)
    }

    pub fn tm_prop_over_im(&self) -> Option<f64> {
        self.split.map(|s| s.propagating.value / self.p_im)
    }
}

/// Matsubara pressures of both polarizations and, when `with_split`, the
/// evanescent/propagating decomposition of the TM part.
pub fn pressure_breakdown(
    params: &PhysicalParams,
    cfg: &SummationConfig,
    with_split: bool,
) -> Result<PressureBreakdown> {
    let p_tm = pressure_matsubara(params, Polarization::Tm, cfg)?;
    let p_te = pressure_matsubara(params, Polarization::Te, cfg)?;
    let p_total = PressureValue::new(p_tm.value + p_te.value, p_tm.error + p_te.error);
    if p_tm.value >= 0.0 || p_te.value >= 0.0 {
        log::warn!(
            "non-attractive pressure at a = {:e} m: P_TM = {:e}, P_TE = {:e}",
            params.separation_m,
            p_tm.value,
            p_te.value
        );
    }
    let split = if with_split {
        let ev = pressure_evanescent(params, Polarization::Tm, cfg)?;
        let prop = pressure_propagating_residual(p_tm, ev.total);
        Some(TmSplit {
            evanescent: ev.total,
            plasmonic: ev.plasmonic,
            deep: ev.deep,
            propagating: prop,
        })
    } else {
        None
    };
    Ok(PressureBreakdown {
        separation_m: params.separation_m,
        temperature_k: params.temperature_k,
        p_tm,
        p_te,
        p_total,
        p_im: ideal_metal_classical(params)?,
        split,
    })
}

/// One row of a separation sweep; failures are kept per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub separation_m: f64,
    pub result: Result<PressureBreakdown>,
}

/// `n` separations spaced logarithmically on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (l0, l1) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| {
                    if i == 0 {
                        lo
                    } else if i == n - 1 {
                        hi
                    } else {
                        (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

pub const MIN_SWEEP_SEPARATION: f64 = 50e-9;

/// Pressure breakdown at each separation of an ascending grid. Rows are
/// evaluated in parallel and returned in grid order.
pub fn sweep(
    grid: &[f64],
    params: &PhysicalParams,
    cfg: &SummationConfig,
    with_split: bool,
) -> Result<Vec<SweepRow>> {
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("separation grid must be strictly ascending".into()));
    }
    if let Some(&a) = grid.iter().find(|&&a| !(a >= MIN_SWEEP_SEPARATION)) {
        return Err(Error::InvalidParameter(format!(
            "separations must be >= {MIN_SWEEP_SEPARATION:e} m, got {a:e}"
        )));
    }
    cfg.validate()?;
    Ok(grid
        .par_iter()
        .map(|&a| SweepRow {
            separation_m: a,
            result: params
                .with_separation(a)
                .and_then(|p| pressure_breakdown(&p, cfg, with_split)),
        })
        .collect())
}

/// Adaptive integral of a fallible integrand. The first error raised by the
/// integrand aborts the result; non-convergence is an error as well.
pub(crate) fn integrate_fallible<T: QuadValue>(
    f: &dyn Fn(f64) -> Result<T>,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    abs_tol: f64,
    singularities: impl IntoIterator<Item = Singularity>,
) -> Result<IntegrationResult<T>> {
    let failure = std::cell::RefCell::new(None);
    let res = IntegrationProblem::new(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                T::zero()
            }
        },
        lo,
        hi,
    )
    .rel_tol(rel_tol)
    .abs_tol(abs_tol.max(1e-300))
    .singularities(singularities)
    .integrate();
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    res?.require_converged()
}

/// Sum of values in a fixed order with compensation.
pub(crate) fn ordered_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = CompensatedSum::new();
    for v in values {
        s.add(v);
    }
    s.value()
}
