use thiserror::Error;

/// Every failure the workbench can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix does not define a homomorphism: {0}")]
    NotWellDefined(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("zero modulus at column {column}: Z/0 is not a finite cyclic group")]
    ZeroModulus { column: usize },

    #[error("oracle budget exceeded: {generators} generators > budget {budget}")]
    BudgetExceeded { generators: u128, budget: u128 },

    #[error("inconsistent orders: {0}")]
    InconsistentOrders(String),

    #[error("tower claim violated: {0}")]
    ClaimViolation(String),

    #[error("functor has no induced map here: {0}")]
    UnsupportedInducedMap(String),

    #[error("declared limit failed compatibility: {0}")]
    LimitNotValidated(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("term shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unresolved tower reference `{0}`")]
    UnresolvedTowerRef(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
