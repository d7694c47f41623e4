use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pole of the kernel at x = {0:e} (|x| = v_F q)")]
    Pole(f64),

    #[error(
        "quadrature did not converge: value {value:e}, error estimate {error:e}, \
         worst cell [{lo:e}, {hi:e}]"
    )]
    NoConvergence {
        value: f64,
        error: f64,
        lo: f64,
        hi: f64,
    },

    #[error("sequence acceleration failed: {0}")]
    Acceleration(String),

    #[error("input is not real within tolerance: imaginary part {imag:e} vs magnitude {magnitude:e}")]
    NotReal { imag: f64, magnitude: f64 },
}
