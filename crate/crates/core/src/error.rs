use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("measure space has no points")]
    EmptySpace,

    #[error("weight at index {0} is not strictly positive")]
    NonPositiveWeight(usize),

    #[error("points and weights have different lengths ({points} vs {weights})")]
    LengthMismatch { points: usize, weights: usize },

    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),

    #[error("unknown point label {0:?}")]
    UnknownPoint(String),

    #[error("blocks do not partition the space: {0}")]
    NotAPartition(String),

    #[error("family is not separated: point {0:?} lies in two fiber supports")]
    NotSeparated(String),

    #[error("matrix is not square or does not match the space: expected {expected}x{expected}, got {rows}x{cols}")]
    DimensionMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("form is not Markovian: {0}")]
    NotMarkovian(crate::forms::MarkovViolation),

    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),

    #[error("resolvent parameter must be positive, got {0}")]
    NonPositiveAlpha(f64),

    #[error("Yosida parameter must be positive, got {0}")]
    NonPositiveBeta(f64),

    #[error("form has a killing part; the transform requires a killing-free form")]
    HasKilling,

    #[error("density must be strictly positive (index {0})")]
    NonPositivePhi(usize),

    #[error("exponent p must be finite and at least 1, got {0}")]
    InvalidP(f64),

    #[error("fiber {fiber}: expected dimension {expected}, got {found}")]
    FiberDimensionMismatch {
        fiber: usize,
        expected: usize,
        found: usize,
    },

    #[error("operator is not decomposable (off-block norm {0:e})")]
    NotDecomposable(f64),

    #[error("decompositions have different invariant partitions")]
    PartitionMismatch,

    #[error("measure is not invariant (defect {0:e})")]
    NotInvariant(f64),

    #[error("measure has a negative mass at index {0}")]
    NegativeMass(usize),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid instance: {0}")]
    Schema(String),

    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
