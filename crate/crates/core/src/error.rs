use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {0} is not supported (expected 2, 4 or 8)")]
    BadDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("tensor product of dimensions {left} and {right} exceeds 8")]
    DimensionOverflow { left: usize, right: usize },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("operator is not a valid density operator: {0}")]
    InvalidDensity(&'static str),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
