use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{file}:{line}: {reason}")]
    Parse {
        file: String,
        line: usize,
        reason: String,
    },

    #[error("invalid entry for '{term}'{}: {reason}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Validation {
        term: String,
        line: Option<usize>,
        reason: String,
    },

    #[error("training data is empty")]
    EmptyDataset,

    #[error("training data has {0} distinct class(es); at least 2 are required")]
    TooFewClasses(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite feature value at document {doc}, column {column}")]
    NonFinite { doc: usize, column: usize },

    #[error("feature vector does not belong to the model's feature space")]
    SpaceMismatch,

    #[error("unsupported format version: found {found}, expected {expected}")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("corrupt model data: {0}")]
    Corrupt(String),

    #[error("document {doc} has no {field}")]
    MissingField { doc: usize, field: &'static str },

    #[error("topic '{0}' has no negativity value")]
    UnknownTopic(String),

    #[error("training corpus has no positive documents; the sarcasm stage cannot be trained")]
    NoPositives,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(file: impl Into<String>, line: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            file: file.into(),
            line,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
