use thiserror::Error;

/// Errors produced by the library. Each class maps to a distinct CLI exit
/// code: parse/structure 2, axiom 3, contract/validation 4, resource 5.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error (line {line}): {msg}")]
    Parse { line: usize, msg: String },

    /// Malformed data (row length mismatch, value out of range, size
    /// mismatch). Distinct from an axiom failure.
    #[error("structural error: {0}")]
    Structure(String),

    #[error("axiom failure: {0}")]
    Axiom(String),

    /// A documented precondition was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Input data fails a validation rule of a construction.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    /// A consistency assertion failed; indicates a bug or an axiom-check
    /// bypass upstream.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Structure(_) | Error::Io(_) => 2,
            Error::Axiom(_) => 3,
            Error::Contract(_) | Error::Validation(_) | Error::Internal(_) => 4,
            Error::Resource(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
