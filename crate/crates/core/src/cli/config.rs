//! JSON run configuration. Every object rejects unknown keys; absent fields
//! take the library defaults. Inputs are SI throughout.

use crate::lifshitz::{log_grid, SummationConfig};
use crate::params::{MatsubaraPoint, PhysicalParams, SpectralPoint};
use crate::response::ResponseConfig;
use serde::Deserialize;
use std::path::Path;

use super::CliError;

pub const DEFAULT_GRID_LO_M: f64 = 200e-9;
pub const DEFAULT_GRID_HI_M: f64 = 4e-6;
pub const DEFAULT_GRID_POINTS: usize = 25;

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub temperature_k: Option<f64>,
    pub separation_m: Option<f64>,
    pub vf_over_c: Option<f64>,
    pub alpha: Option<f64>,
    pub summation: Option<SummationSection>,
    pub response: Option<ResponseSection>,
    pub grid: Option<GridSection>,
    /// Spectral points of the `permittivity` and `reflection` dumps.
    pub points: Option<Vec<PointSpec>>,
    /// Whether `sweep` computes the TM evanescent/propagating split.
    pub split: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SummationSection {
    pub rel_tol: Option<f64>,
    pub real_rel_tol: Option<f64>,
    pub direct_rel_tol: Option<f64>,
    pub l_max_cap: Option<u32>,
    pub q_cutoff_factor: Option<f64>,
    pub singularity_offset: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ResponseSection {
    pub rel_tol: Option<f64>,
    pub fermi_cutoff: Option<f64>,
    pub max_cells: Option<usize>,
}

/// Either an explicit list of separations or a logarithmic grid.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub separations_m: Option<Vec<f64>>,
    pub lo_m: Option<f64>,
    pub hi_m: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum AxisSpec {
    Real,
    Imaginary,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub axis: AxisSpec,
    pub q_per_m: f64,
    /// Real axis only.
    pub omega_rad_s: Option<f64>,
    /// Imaginary axis only: Matsubara index.
    pub l: Option<u32>,
}

/// A validated spectral point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Real(SpectralPoint),
    Imaginary(MatsubaraPoint),
}

/// Scalar overrides coming from command-line flags.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub temperature_k: Option<f64>,
    pub separation_m: Option<f64>,
    pub tol: Option<f64>,
}

fn config_error(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if o.temperature_k.is_some() {
            self.temperature_k = o.temperature_k;
        }
        if o.separation_m.is_some() {
            self.separation_m = o.separation_m;
        }
        if let Some(t) = o.tol {
            self.summation.get_or_insert_with(Default::default).rel_tol = Some(t);
            self.response.get_or_insert_with(Default::default).rel_tol = Some(t);
        }
    }

    pub fn physical(&self) -> Result<PhysicalParams, CliError> {
        let d = PhysicalParams::default();
        let p = PhysicalParams {
            temperature_k: self.temperature_k.unwrap_or(d.temperature_k),
            separation_m: self.separation_m.unwrap_or(d.separation_m),
            vf_over_c: self.vf_over_c.unwrap_or(d.vf_over_c),
            alpha: self.alpha.unwrap_or(d.alpha),
        };
        p.validate().map_err(config_error)?;
        Ok(p)
    }

    pub fn summation(&self) -> Result<SummationConfig, CliError> {
        let mut c = SummationConfig::default();
        if let Some(s) = &self.summation {
            c.rel_tol = s.rel_tol.unwrap_or(c.rel_tol);
            c.real_rel_tol = s.real_rel_tol.unwrap_or(c.real_rel_tol);
            c.direct_rel_tol = s.direct_rel_tol.unwrap_or(c.direct_rel_tol);
            c.l_max_cap = s.l_max_cap.unwrap_or(c.l_max_cap);
            c.q_cutoff_factor = s.q_cutoff_factor.unwrap_or(c.q_cutoff_factor);
            c.singularity_offset = s.singularity_offset.unwrap_or(c.singularity_offset);
        }
        c.validate().map_err(config_error)?;
        Ok(c)
    }

    pub fn response(&self) -> Result<ResponseConfig, CliError> {
        let mut c = ResponseConfig::default();
        if let Some(s) = &self.response {
            c.rel_tol = s.rel_tol.unwrap_or(c.rel_tol);
            c.fermi_cutoff = s.fermi_cutoff.unwrap_or(c.fermi_cutoff);
            c.max_cells = s.max_cells.unwrap_or(c.max_cells);
        }
        if !(c.rel_tol > 0.0 && c.rel_tol < 1.0) {
            return Err(config_error(format!("response.rel_tol must lie in (0, 1), got {}", c.rel_tol)));
        }
        if !(c.fermi_cutoff >= 10.0 && c.fermi_cutoff.is_finite()) {
            return Err(config_error(format!(
                "response.fermi_cutoff must be >= 10, got {}",
                c.fermi_cutoff
            )));
        }
        if c.max_cells < 10 {
            return Err(config_error("response.max_cells must be >= 10"));
        }
        Ok(c)
    }

    /// Separation grid; the default is 25 log-spaced points on [200 nm, 4 μm].
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        let g = self.grid.clone().unwrap_or_default();
        if let Some(list) = g.separations_m {
            if g.lo_m.is_some() || g.hi_m.is_some() || g.points.is_some() {
                return Err(config_error(
                    "grid: give either separations_m or lo_m/hi_m/points, not both",
                ));
            }
            return Ok(list);
        }
        let lo = g.lo_m.unwrap_or(DEFAULT_GRID_LO_M);
        let hi = g.hi_m.unwrap_or(DEFAULT_GRID_HI_M);
        let n = g.points.unwrap_or(DEFAULT_GRID_POINTS);
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) || (n > 1 && hi == lo) {
            return Err(config_error(format!("grid: need 0 < lo_m < hi_m, got [{lo}, {hi}]")));
        }
        Ok(log_grid(lo, hi, n))
    }

    pub fn points(&self, params: &PhysicalParams) -> Result<Vec<Point>, CliError> {
        let Some(list) = &self.points else {
            return Ok(Vec::new());
        };
        list.iter()
            .enumerate()
            .map(|(i, s)| {
                let here = |m: String| config_error(format!("points[{i}]: {m}"));
                match (s.axis, s.omega_rad_s, s.l) {
                    (AxisSpec::Real, Some(w), None) => SpectralPoint::new(s.q_per_m, w)
                        .map(Point::Real)
                        .map_err(|e| here(e.to_string())),
                    (AxisSpec::Imaginary, None, Some(l)) => MatsubaraPoint::new(s.q_per_m, l, params)
                        .map(Point::Imaginary)
                        .map_err(|e| here(e.to_string())),
                    (AxisSpec::Real, _, _) => Err(here("real axis needs omega_rad_s and no l".into())),
                    (AxisSpec::Imaginary, _, _) => {
                        Err(here("imaginary axis needs l and no omega_rad_s".into()))
                    }
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_json(r#"{"temperature": 300}"#).is_err());
        assert!(RunConfig::from_json(r#"{"summation": {"tol": 1e-3}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"points": [{"axis": "real", "q_per_m": 1, "w": 2}]}"#).is_err());
    }

    #[test]
    fn defaults_and_overrides() {
        let mut c = RunConfig::from_json(r#"{"temperature_k": 77, "grid": {"points": 3}}"#).unwrap();
        c.apply(&Overrides {
            separation_m: Some(5e-7),
            tol: Some(1e-6),
            ..Default::default()
        });
        let p = c.physical().unwrap();
        assert_eq!((p.temperature_k, p.separation_m), (77.0, 5e-7));
        assert_eq!(c.summation().unwrap().rel_tol, 1e-6);
        assert_eq!(c.response().unwrap().rel_tol, 1e-6);
        assert_eq!(c.grid().unwrap().len(), 3);
        assert_eq!(RunConfig::default().grid().unwrap().len(), DEFAULT_GRID_POINTS);
    }

    #[test]
    fn invalid_values_are_config_errors() {
        let c = RunConfig::from_json(r#"{"separation_m": -1}"#).unwrap();
        assert!(matches!(c.physical(), Err(CliError::Config(_))));
        let c = RunConfig::from_json(r#"{"points": [{"axis": "imaginary", "q_per_m": 1e6, "omega_rad_s": 1}]}"#)
            .unwrap();
        assert!(c.points(&PhysicalParams::default()).is_err());
        let c = RunConfig::from_json(r#"{"grid": {"separations_m": [1e-6], "points": 4}}"#).unwrap();
        assert!(c.grid().is_err());
    }
}
