//! Error type shared across the crate.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the library.
#[derive(Debug)]
pub enum Error {
    /// A parameter or precondition check failed before any work was done.
    InvalidInput(String),
    /// An operation encountered an empty cluster where the math requires a
    /// nonempty one. `iteration` is set when the event happened mid-run.
    EmptyCluster {
        cluster: usize,
        iteration: Option<usize>,
    },
    /// A CSV file could not be parsed. Rows and columns are 1-based.
    CsvParse {
        path: String,
        row: usize,
        col: Option<usize>,
        msg: String,
    },
    /// An I/O operation failed.
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors that should be reported as bad input (CLI exit code 1)
    /// rather than a runtime failure (exit code 2).
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::CsvParse { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::EmptyCluster { cluster, iteration } => match iteration {
                Some(t) => write!(f, "cluster {cluster} became empty at iteration {t}"),
                None => write!(f, "cluster {cluster} is empty"),
            },
            Error::CsvParse {
                path,
                row,
                col,
                msg,
            } => match col {
                Some(c) => write!(f, "{path}: row {row}, column {c}: {msg}"),
                None => write!(f, "{path}: row {row}: {msg}"),
            },
            Error::Io { path, source } => write!(f, "{path}: {source}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}
