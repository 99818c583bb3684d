use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("window insufficient: {0}")]
    InsufficientWindow(String),

    #[error("epsilon {0} outside (0, 1/2]")]
    EpsilonOutOfRange(String),

    #[error("budget exceeded: {what} needs {needed}, limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("target set is not covered by the ball family ({uncovered} atoms uncovered)")]
    NotCoverable { uncovered: usize },

    #[error("target set carries no mass (LP optimum is zero)")]
    NotChargeable,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
