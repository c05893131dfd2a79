use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid argument or configuration value.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A property that is supposed to hold unconditionally was observed to
    /// fail (e.g. a strongly connected pair left unmatched).
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// Rejection sampling of the conditioning event accepted too rarely.
    #[error(
        "conditioning acceptance rate fell below {floor:e}: \
         accepted {accepted} of {attempted} attempts"
    )]
    Conditioning {
        accepted: u64,
        attempted: u64,
        floor: f64,
    },

    /// Malformed text input (config file or CSV).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
