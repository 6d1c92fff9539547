use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("size limit exceeded: {0}")]
    TooLarge(String),
    #[error("division by zero")]
    ZeroDivision,
    #[error("bad basis: {0}")]
    BadBasis(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("unsolvable: {0}")]
    Unsolvable(String),
    #[error("bad code: {0}")]
    BadCode(String),
    #[error("bad scheme: {0}")]
    BadScheme(String),
    #[error("bad file: {0}")]
    BadFile(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
