use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// A stated hypothesis of a check or theorem does not hold for the inputs.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A computation ran out of precision, truncation or iteration budget.
    #[error("resource exhausted: {0}")]
    Resource(String),
    /// Evaluation at the pole of a p-adic L-function.
    #[error("pole of the p-adic L-function at s = 1 (residue {residue})")]
    Pole { residue: String },
    /// Malformed textual input (coefficient strings, dumps, cache files).
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
macro_rules! precondition {
    ($($arg:tt)*) => { $crate::error::Error::Precondition(format!($($arg)*)) };
}
macro_rules! resource {
    ($($arg:tt)*) => { $crate::error::Error::Resource(format!($($arg)*)) };
}
pub(crate) use {domain, precondition, resource};
