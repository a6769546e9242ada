use std::fmt;

/// Errors shared across the solver suite.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two values built over different block structures were combined.
    StructureMismatch { expected: String, got: String },
    /// A vector or matrix had the wrong length/shape for the operation.
    DimensionMismatch { context: &'static str, expected: usize, got: usize },
    /// The stacked constraint operator is rank deficient.
    DegenerateData { min_singular_value: f64 },
    /// An iterate left the interior of the cone (or a factorization
    /// detected a non-positive-definite operator mid-solve).
    LostInteriority { context: &'static str },
    /// A matrix expected to be positive definite was not.
    NotPositiveDefinite { context: &'static str, min_eigenvalue: f64 },
    /// Non-finite (NaN/inf) entries in input data.
    NonFinite { context: &'static str },
    /// An argument violated a documented precondition.
    InvalidArgument(String),
    /// The requested operation is not supported at this problem size/shape.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::StructureMismatch { expected, got } => {
                write!(f, "block structure mismatch: expected {expected}, got {got}")
            }
            Error::DimensionMismatch { context, expected, got } => {
                write!(f, "dimension mismatch in {context}: expected {expected}, got {got}")
            }
            Error::DegenerateData { min_singular_value } => write!(
                f,
                "degenerate data: constraint operator is rank deficient \
                 (smallest singular value estimate {min_singular_value:.3e})"
            ),
            Error::LostInteriority { context } => {
                write!(f, "lost interiority during {context}")
            }
            Error::NotPositiveDefinite { context, min_eigenvalue } => write!(
                f,
                "matrix not positive definite in {context} (min eigenvalue {min_eigenvalue:.3e})"
            ),
            Error::NonFinite { context } => write!(f, "non-finite entries in {context}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
