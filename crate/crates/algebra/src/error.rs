use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand is already a square in the current tower")]
    AlreadySquare,
    #[error("degree {degree} exceeds the factorization bound {bound}")]
    DegreeBoundExceeded { degree: usize, bound: usize },
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("division is not exact")]
    InexactDivision,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Unsupported(String),
}
