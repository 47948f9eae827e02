use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The column is (numerically) in the span of the stored columns.
    #[error("column is linearly dependent on the current factorization")]
    DegenerateColumn,

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("triangular factor is singular at diagonal entry {index}")]
    SingularTriangle { index: usize },

    #[error("non-finite value encountered")]
    NonFinite,

    #[error("zero search direction")]
    ZeroDirection,

    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("subdifferential inverse returned {c}, outside [{lo}, {hi}]")]
    InverseOutOfRange { c: f64, lo: f64, hi: f64 },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
