use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

/// Points at the record a value came from: a corpus file name and a 1-based
/// line number. Derived records point at the record that caused them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Locator {
    pub file: String,
    pub line: usize,
}

impl Locator {
    pub fn new(file: impl Into<String>, line: usize) -> Self {
        Self {
            file: file.into(),
            line,
        }
    }
}

impl fmt::Display for Locator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.file, self.line)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("integrity error at {locator}: {message}")]
    Integrity { locator: Locator, message: String },

    #[error("unknown individual `{0}`")]
    UnknownIndividual(String),

    #[error("unknown expertise area `{0}`")]
    UnknownArea(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("assignment covers no expertise area")]
    EmptyAssignment,

    #[error("{combinations} candidate combinations exceed the cap of {cap}")]
    CandidateExplosion { combinations: u128, cap: u64 },

    #[error("need {needed} populated expertise areas, snapshot has {available}")]
    InsufficientAreas { needed: usize, available: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn integrity(locator: &Locator, message: impl Into<String>) -> Self {
        Error::Integrity {
            locator: locator.clone(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by file access rather than by the data or the
    /// query itself.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Format { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
