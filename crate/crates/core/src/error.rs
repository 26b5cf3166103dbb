use thiserror::Error;

/// Errors raised by the symbolic and numeric engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("weight {weight} exceeds the configured cap {cap}")]
    WeightCapExceeded { weight: usize, cap: usize },

    #[error("grade {grade} exceeds the configured cap {cap}")]
    GradeCapExceeded { grade: usize, cap: usize },

    #[error("half-shuffle products are only defined on nonempty words")]
    EmptyOperand,

    #[error("invalid letter {0}: letters are positive integers")]
    InvalidLetter(u32),

    #[error("empty block: every block must contain at least one letter")]
    EmptyBlock,

    #[error("invalid surjection {values:?}: {reason}")]
    InvalidSurjection { values: Vec<u32>, reason: String },

    #[error("invalid surjection parameters n={n}, k={k}")]
    InvalidSurjectionRange { n: usize, k: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid descent set {set:?} for arity {n}")]
    InvalidDescentSet { n: usize, set: Vec<usize> },

    #[error("element has a nonzero grade-0 term")]
    ConstantTerm,

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("letter {0} is not bound to a sample path")]
    UnboundLetter(u32),

    #[error("sample paths live on different grids")]
    GridMismatch,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("invalid format: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Format(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
