use thiserror::Error;

use crate::market::Firm;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("singular linear system: no nonzero pivot in column {step}")]
    SingularSystem { step: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0}")]
    InvalidParams(String),

    #[error("firm {firm} payoff is not strictly concave in its own variable")]
    ConcavityViolation { firm: Firm },

    #[error("slice payoff is constant in coordinate {coordinate}")]
    DegenerateSlice { coordinate: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid iteration options: {0}")]
    InvalidOptions(String),

    #[error("invalid strategy assignment {0:?}")]
    ParseAssignment(String),

    #[error("closed-form outputs assume cA = cB")]
    AsymmetricCosts,
}
