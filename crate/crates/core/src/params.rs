//! Physical constants and the fixed inputs of a computation.

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Fine-structure constant.
pub const FINE_STRUCTURE: f64 = 7.297_352_5693e-3;
/// Elementary charge, C (used only to express energies in eV).
pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;
/// Upper energy bound of the Dirac model, eV.
pub const DIRAC_MODEL_LIMIT_EV: f64 = 3.0;

/// Temperature, separation and material constants of one computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub temperature_k: f64,
    pub separation_m: f64,
    pub vf_over_c: f64,
    pub alpha: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            temperature_k: 300.0,
            separation_m: 1e-6,
            vf_over_c: 1.0 / 300.0,
            alpha: FINE_STRUCTURE,
        }
    }
}

impl PhysicalParams {
    pub fn new(temperature_k: f64, separation_m: f64) -> Result<Self> {
        let p = Self {
            temperature_k,
            separation_m,
            ..Self::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_fermi_velocity(mut self, vf_over_c: f64) -> Result<Self> {
        self.vf_over_c = vf_over_c;
        self.validate()?;
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        self.alpha = alpha;
        self.validate()?;
        Ok(self)
    }

    pub fn with_temperature(mut self, temperature_k: f64) -> Result<Self> {
        self.temperature_k = temperature_k;
        self.validate()?;
        Ok(self)
    }

    pub fn with_separation(mut self, separation_m: f64) -> Result<Self> {
        self.separation_m = separation_m;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.vf_over_c > 0.0 && self.vf_over_c < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "vF/c must lie in (0, 1), got {}",
                self.vf_over_c
            )));
        }
        if !(self.separation_m > 0.0 && self.separation_m.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "separation must be positive, got {}",
                self.separation_m
            )));
        }
        if !(self.temperature_k >= 0.0 && self.temperature_k.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "temperature must be non-negative, got {}",
                self.temperature_k
            )));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be non-negative, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    /// Fermi velocity in m/s.
    pub fn fermi_velocity(&self) -> f64 {
        self.vf_over_c * SPEED_OF_LIGHT
    }

    /// ħc/(k_B T) in meters; infinite at T = 0.
    pub fn beta(&self) -> f64 {
        HBAR * SPEED_OF_LIGHT / (BOLTZMANN * self.temperature_k)
    }

    /// Characteristic frequency c/(2a), rad/s.
    pub fn characteristic_frequency(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.separation_m)
    }

    /// ħc/(2a) in eV.
    pub fn characteristic_energy_ev(&self) -> f64 {
        HBAR * self.characteristic_frequency() / ELECTRON_VOLT
    }

    /// Whether the separation is inside the Dirac-model application region.
    /// Logs a warning when it is not; computations still proceed.
    pub fn check_dirac_validity(&self) -> bool {
        let e = self.characteristic_energy_ev();
        let ok = e <= DIRAC_MODEL_LIMIT_EV;
        if !ok {
            log::warn!(
                "ħc/(2a) = {e:.3} eV exceeds the {DIRAC_MODEL_LIMIT_EV} eV Dirac-model limit \
                 (a = {:e} m)",
                self.separation_m
            );
        }
        ok
    }

    /// Matsubara frequency ξ_l = 2π k_B T l / ħ.
    pub fn matsubara_frequency(&self, l: u32) -> f64 {
        2.0 * std::f64::consts::PI * BOLTZMANN * self.temperature_k * f64::from(l) / HBAR
    }

    /// ħω/(2 k_B T), the argument of the Fermi and Bose factors.
    pub fn reduced_energy(&self, omega: f64) -> f64 {
        HBAR * omega / (2.0 * BOLTZMANN * self.temperature_k)
    }
}

/// Point on the real frequency axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    /// In-plane wave number, 1/m.
    pub q: f64,
    /// Angular frequency, rad/s.
    pub omega: f64,
}

impl SpectralPoint {
    pub fn new(q: f64, omega: f64) -> Result<Self> {
        if !(q >= 0.0 && q.is_finite()) {
            return Err(Error::InvalidParameter(format!("q must be >= 0, got {q}")));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "omega must be > 0, got {omega}"
            )));
        }
        Ok(Self { q, omega })
    }
}

/// Point on the imaginary frequency axis at the Matsubara frequency ξ_l.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraPoint {
    pub q: f64,
    pub l: u32,
    pub xi: f64,
}

impl MatsubaraPoint {
    pub fn new(q: f64, l: u32, params: &PhysicalParams) -> Result<Self> {
        if !(q >= 0.0 && q.is_finite()) {
            return Err(Error::InvalidParameter(format!("q must be >= 0, got {q}")));
        }
        if params.temperature_k <= 0.0 {
            return Err(Error::InvalidParameter(
                "Matsubara frequencies need T > 0".into(),
            ));
        }
        Ok(Self {
            q,
            l,
            xi: params.matsubara_frequency(l),
        })
    }
}
