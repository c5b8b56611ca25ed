//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("fluctuation operator must be real symmetric: {0}")]
    NotRealSymmetric(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("density matrix validation failed: {0}")]
    InvalidDensity(String),

    #[error("time step too coarse: {0}")]
    TimeStepTooCoarse(String),

    #[error("linear solve failed: {0}")]
    SingularSystem(String),
}
