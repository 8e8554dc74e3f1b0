use thiserror::Error;

/// Errors raised by the symbolic and numerical layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("incompatible algebras: {0}")]
    IncompatibleAlgebras(String),

    #[error("not a function of a single canonical variable: {0}")]
    NotAFunction(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("derivative order {requested} exceeds the configured maximum {max}")]
    DepthExceeded { requested: u32, max: u32 },

    #[error("cannot deduce a Hermitian counterpart: {0}")]
    NotDeducible(String),

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error("adjoint series did not terminate within {bound} nested commutators")]
    NonTerminating { bound: usize },

    #[error("matrix dimension {dim} exceeds the budget of {budget}")]
    DimensionBudget { dim: usize, budget: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
