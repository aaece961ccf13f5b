use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input text; `line` is 1-based.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A caller broke an operation's stated precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Structural precondition of a construction does not hold for this input
    /// (twins present, hole found, short cycle, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An internal invariant failed. Always a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("instance has {n} vertices, exact methods are limited to {max}")]
    TooLarge { n: usize, max: usize },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// True for errors caused by the input rather than by this library.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Invariant(_))
    }
}
