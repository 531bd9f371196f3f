use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed simplicial data: {0}")]
    Malformed(String),
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("map is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("diagram does not commute: {0}")]
    NonCommuting(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not a Kan complex: {0}")]
    NotKan(String),
    #[error("invalid Reedy category: {0}")]
    InvalidReedy(String),
    #[error("missing assignment: {0}")]
    Missing(String),
    #[error("internal commutation failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
