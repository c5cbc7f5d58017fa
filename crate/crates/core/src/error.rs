use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("odd weight {0}")]
    OddWeight(u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular matrix")]
    Singular,
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("pi power mismatch: expected {expected}, found {found}")]
    PiPowerMismatch { expected: u32, found: u32 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("at tree path {path}: {source}")]
    AtNode { path: String, source: Box<Error> },
    #[error("malformed tree: {0}")]
    Tree(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
