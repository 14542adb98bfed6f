use h10_algebra::AlgebraError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("exceptional point: ({n},{r}) gives the identity or an x-coordinate of zero")]
    ExceptionalPoint { n: i64, r: i64 },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("series precision exhausted")]
    PrecisionExhausted,
    #[error("window exceeded: {0}")]
    WindowExceeded(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub type Result<T> = std::result::Result<T, CoreError>;
