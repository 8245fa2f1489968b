use thiserror::Error;

/// Errors raised by grid construction, transforms, parsing and searches.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdaError {
    #[error("malformed grid: {0}")]
    Malformed(String),

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error("{what} is not a bijection on [0, {len})")]
    NotBijective { what: &'static str, len: usize },

    #[error("index {index} out of range for {what} of size {len}")]
    OutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("premise not met: {0}")]
    Premise(String),
}

pub type Result<T, E = PdaError> = std::result::Result<T, E>;
