use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("matrix dimension {0} exceeds the supported maximum of {max}", max = crate::linalg::MAX_DIM)]
    TooLarge(usize),

    #[error("matrix has {found} entries, expected {expected} for a square matrix")]
    NotSquare { expected: usize, found: usize },

    #[error("non-finite value at {0}")]
    NonFinite(String),

    #[error("vector is not unit length (norm {0})")]
    NotUnit(f64),

    #[error("matrix is not Hermitian (skew part {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive definite (smallest eigenvalue {0:e})")]
    NotPositiveDefinite(f64),

    #[error("zero operator has no antieigenvalues")]
    ZeroOperator,

    #[error("zero vector is not admissible")]
    ZeroVector,

    #[error("vector lies in the numerical kernel of the operator (|Tf| = {0:e})")]
    DegenerateVector(f64),

    #[error("no admissible vector found: every restart landed in the numerical kernel")]
    NoAdmissibleVector,

    #[error("requested {requested} antieigenvalues of a {n}x{n} operator")]
    TooManyStages { requested: usize, n: usize },

    #[error("grid oracle supports n <= 3, got n = {0}")]
    OracleDimension(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed matrix document: {0}")]
    Document(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
