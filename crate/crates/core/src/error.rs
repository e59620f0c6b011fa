//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime of at least 2")]
    InvalidModulus(u64),

    #[error("inversion of zero in F_{0}")]
    DivisionByZero(u64),

    #[error("operands belong to different fields (F_{0} vs F_{1})")]
    FieldMismatch(u64, u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("linear system is singular: {0}")]
    SingularSystem(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("chain length r={r} out of range: must satisfy 1 <= r <= min(K={k}, T={t})")]
    InvalidChainLength { r: u32, k: u32, t: u32 },

    #[error("cannot partition: {0}")]
    PartitionError(String),

    #[error("no valid evaluation points found after {attempts} attempts")]
    PointSelectionFailed { attempts: u32 },

    #[error("invalid fraction: {0}")]
    InvalidFraction(String),

    #[error("audit space too large: {0}")]
    AuditTooLarge(String),

    #[error("search space too large: estimated {estimate} tables exceeds limit {limit}")]
    SearchTooLarge { estimate: u128, limit: u128 },

    #[error("sumset of an empty set is undefined")]
    EmptySet,

    #[error("matrix file format error: {0}")]
    MatrixFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
