use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("matrix is singular to working precision")]
    SingularMatrix,
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("ill-conditioned Schur block exchange at position {0}")]
    SwapIllConditioned(usize),
    #[error("simplex made no progress within {0} iterations")]
    NumericalStall(usize),
    #[error("set is empty")]
    EmptySet,
    #[error("set is unbounded")]
    Unbounded,
    #[error("vertex enumeration supports dimension <= 3, got {0}")]
    DimensionTooHigh(usize),
    #[error("closed-loop matrix has eigenvalues at zero; use the singular branch")]
    SingularDynamics,
    #[error("closed-loop matrix has no zero eigenvalues")]
    NoZeroEigenvalues,
    #[error("trailing Schur block failed the nilpotency test (||S22^{power}||_F = {norm:e})")]
    NotNilpotent { power: usize, norm: f64 },
    #[error("recurrence did not reach a fixed point within {0} iterations")]
    IterationCapExceeded(usize),
    #[error("constraint set must be bounded and contain the origin in its interior: {0}")]
    InvalidConstraintSet(String),
    #[error("closed loop is not stable (spectral radius {0})")]
    Unstabilizable(f64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
