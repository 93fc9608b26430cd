use std::fmt;

use thiserror::Error;

use crate::ext::Flavor;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("flavor mismatch: {left:?} vs {right:?}")]
    FlavorMismatch { left: Flavor, right: Flavor },

    #[error("value {value} is not allowed in the {flavor:?} flavor")]
    OutOfFlavor { value: String, flavor: Flavor },

    #[error("NaN is not an extended real")]
    NotANumber,

    #[error("shape error: {0}")]
    Shape(String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("functions are defined on different point sets")]
    DomainMismatch,

    #[error("{0}")]
    Domain(String),

    #[error("resource limit exceeded: {requested} grid points requested, cap is {cap}")]
    ResourceLimit { requested: u128, cap: u128 },

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// A syntax error in one of the text formats, located by 1-based line and
/// column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}
