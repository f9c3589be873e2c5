use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("group of order {order} exceeds the enumeration cap of {cap}")]
    GroupTooLarge { order: u128, cap: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input outside the set where a map is defined (zero coordinates for
    /// Laurent monomials, `Q(x) = 0`, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A checked postcondition did not hold.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn dims(expected: usize, found: usize) -> Self {
        Error::DimensionMismatch { expected, found }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
