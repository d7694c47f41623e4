//! Casimir pressure between two parallel pristine graphene sheets.
//!
//! The graphene response is the Dirac-model nonlocal dielectric permittivity
//! (longitudinal and transverse) at finite temperature. The pressure is
//! assembled both from the Matsubara sum over imaginary frequencies and from
//! the real-frequency representation split into propagating and evanescent
//! waves.
//!
//! Module map:
//!
//! * [`quadrature`] adaptive Gauss–Kronrod engine, root bracketing, series
//!   acceleration and compensated summation.
//! * [`response`] permittivities on the real and imaginary frequency axes,
//!   spectral region classification, ε ↔ Π ↔ σ conversions.
//! * [`fresnel`] two-dimensional TM/TE reflection coefficients.
//! * [`lifshitz`] pressures, ideal-metal normalization and separation sweeps.
//! * [`cli`] configuration and CSV/JSON emission used by the binary.

pub mod cli;
pub mod error;
pub mod fresnel;
pub mod lifshitz;
pub mod params;
pub mod quadrature;
pub mod response;

pub use error::{Error, Result};
pub use params::{MatsubaraPoint, PhysicalParams, SpectralPoint};
