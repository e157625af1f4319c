use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {malformed} of {total} lines malformed (limit is 1%); first: {first}")]
    TooManyMalformed {
        path: PathBuf,
        malformed: usize,
        total: usize,
        first: String,
    },

    #[error("invalid account name {0:?}")]
    InvalidName(String),

    #[error("invalid quantity {0:?}")]
    InvalidQuantity(String),

    #[error("invalid record: {0}")]
    InvalidRecord(String),

    #[error("duplicate account {0} in snapshot")]
    DuplicateAccount(String),

    #[error("creator cycle through account {0}")]
    CreatorCycle(String),

    #[error("unknown account {0}")]
    UnknownAccount(String),

    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("pagerank did not converge after {iterations} iterations (last delta {delta:e})")]
    NoConvergence {
        iterations: usize,
        delta: f64,
        last: Vec<f64>,
    },

    #[error("calibration needs at least 2 labeled bot communities, got {0}")]
    Calibration(usize),

    #[error("training error: {0}")]
    Training(String),

    #[error("scenario cannot be generated: {0}")]
    Generation(String),

    #[error("evidence bundle error: {0}")]
    Bundle(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}
