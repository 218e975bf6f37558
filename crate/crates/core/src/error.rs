use std::path::PathBuf;

use thiserror::Error;

use crate::js::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: not a usable git repository: {message}")]
    UnusableRepository { path: PathBuf, message: String },
    #[error("repository object could not be read: {0}")]
    RepositoryCorruption(String),
    #[error("unknown commit `{0}`")]
    UnknownCommit(String),
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("unusable training data: {0}")]
    UnusableTrainingData(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("corrupt model: {0}")]
    CorruptModel(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<git2::Error> for Error {
    fn from(e: git2::Error) -> Self {
        Error::RepositoryCorruption(e.message().to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
