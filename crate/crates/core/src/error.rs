use thiserror::Error;

/// Errors raised by tree computations.
///
/// `Divergence` is a result, not a failure: it reports that a norm or a
/// series is infinite, which several experiments expect.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource budget exceeded: {what} needs {needed} but the budget is {budget}")]
    Resource {
        what: String,
        needed: String,
        budget: u64,
    },

    #[error("unsupported tail: {0}")]
    UnsupportedTail(String),

    #[error("divergent: {0}")]
    Divergence(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn is_divergence(&self) -> bool {
        matches!(self, Error::Divergence(_))
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
