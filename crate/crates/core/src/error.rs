use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ring specification: {0}")]
    InvalidSpec(String),
    #[error("non-unit")]
    NonUnit,
    #[error("group of order {order} is too large; raise cap (currently {cap})")]
    TooLarge { order: u64, cap: usize },
    #[error("{0}")]
    OutOfRange(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("wrong parity: {0}")]
    WrongParity(String),
    #[error("{0}")]
    WrongConstruction(String),
    #[error("class functions live on different class data")]
    ClassMismatch,
    #[error("theory violation: {0}")]
    TheoryViolation(String),
    #[error("character table is not certified: {0}")]
    Certificate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
