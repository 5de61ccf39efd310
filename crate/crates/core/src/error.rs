use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown class label {token:?} on line {line}")]
    UnknownLabel { line: usize, token: String },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("single-class dataset")]
    SingleClass,

    #[error("item index {index} out of range (dataset has {num_items} items)")]
    ItemOutOfRange { index: usize, num_items: usize },

    #[error("pattern of size {size} exceeds the enumeration limit of {limit}")]
    SizeLimit { size: usize, limit: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error: 1 usage/config, 2 data, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::UnknownLabel { .. }
            | Error::EmptyDataset
            | Error::SingleClass
            | Error::ItemOutOfRange { .. }
            | Error::SizeLimit { .. } => 2,
            Error::Invariant(_) => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
