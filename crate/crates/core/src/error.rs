use thiserror::Error;

/// Errors raised by the numerical routines and the input parsers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A family descriptor or input document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A root could not be bracketed.
    #[error("bracketing failed for {what}: target {target:e}, last bracket [{lo:e}, {hi:e}]")]
    Bracket {
        what: &'static str,
        target: f64,
        lo: f64,
        hi: f64,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Bracket { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
