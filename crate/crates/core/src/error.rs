//! Crate-wide error type.

/// Errors produced by dataset handling, training, and the bound calculators.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("count overflow: {0}")]
    Overflow(String),

    #[error("lifted dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("dataset has no samples with label {label:+.0}; class-conditional risk is undefined")]
    UndefinedClassRisk { label: f64 },

    #[error("covariance matrix is not symmetric positive definite")]
    NotSpd,

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("out of asymptotic regime: {0}")]
    OutOfRegime(String),

    #[error("no sample size below 2^62 achieves the requested accuracy")]
    UnboundedComplexity,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
