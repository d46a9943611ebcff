use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no convergence after {iterations} iterations (last iterate {last}, |residual| = {residual:e})")]
    Convergence {
        last: Complex64,
        residual: f64,
        iterations: usize,
    },

    #[error("continuation diverged; last good homotopy parameter {last_good}")]
    Continuation { last_good: f64 },

    #[error("no such mode: {0}")]
    NoSuchMode(String),

    #[error("no such level: {0}")]
    NoSuchLevel(String),

    #[error("frequency {frequency_ghz} GHz is at or above the parallel-plate cutoff {cutoff_ghz} GHz")]
    AboveCutoff { frequency_ghz: f64, cutoff_ghz: f64 },

    #[error("unsupported mode: {0}")]
    Unsupported(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("energy {0} has positive imaginary part (gain)")]
    Gain(Complex64),

    #[error("finite-difference box too small: {0}")]
    BoxTooSmall(String),

    #[error("eigensolver failed: {0}")]
    Eigen(String),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
