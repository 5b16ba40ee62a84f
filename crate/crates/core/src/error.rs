use std::path::PathBuf;

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure to read a profile or multi-profile from text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("negative coefficient at byte {offset}")]
    Negative { offset: usize },
    #[error("integer too large at byte {offset}")]
    Overflow { offset: usize },
}

impl ParseError {
    pub(crate) fn syntax(offset: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            offset,
            message: message.into(),
        }
    }

    /// Byte offset into the input where the problem was detected.
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::Negative { offset }
            | ParseError::Overflow { offset } => *offset,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{0} is not a prime power representable in 64 bits")]
    NotPrimePower(String),

    #[error("the zero polynomial is not allowed here")]
    ZeroProfile,

    #[error("{profile} is not a profile with respect to q = {q}")]
    NotAProfile { profile: String, q: u64 },

    #[error("resource cap exceeded: {what} reached {count} (cap {cap})")]
    CapExceeded {
        what: &'static str,
        count: u64,
        cap: u64,
    },

    #[error("multiplicity overflow while building {0}")]
    MultiplicityOverflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cache file {path}: {message}")]
    Cache { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
