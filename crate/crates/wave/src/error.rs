use thiserror::Error;

/// Failures of the discretized wave computations.
#[derive(Debug, Error)]
pub enum WaveError {
    #[error("grid is under-resolved: {0}")]
    Grid(String),
    #[error("spectral tail {tail:e} exceeds {limit:e} of the norm")]
    Resolution { tail: f64, limit: f64 },
    #[error("{fraction:e} of the mass lies outside the admissible region (limit {limit:e})")]
    Admissibility { fraction: f64, limit: f64 },
    #[error("symbol is not finite at x2={x2}, xi2={xi2}")]
    NonFiniteSymbol { x2: f64, xi2: f64 },
    #[error("linear algebra failure: {0}")]
    Linalg(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Core(#[from] rossbytrap_core::Error),
}

pub type Result<T> = std::result::Result<T, WaveError>;
