use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate measurement: {0}")]
    Degenerate(String),

    #[error(
        "operator {location} is not positive semidefinite (min eigenvalue {min_eigenvalue:e})"
    )]
    NotPositive {
        location: String,
        min_eigenvalue: f64,
    },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("numerical integrity: {0}")]
    NumericalIntegrity(String),

    #[error("bracket [{lo}, {hi}] does not straddle the detection boundary")]
    BadBracket { lo: f64, hi: f64 },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
