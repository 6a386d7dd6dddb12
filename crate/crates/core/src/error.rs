use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid input: {0}")]
    Validation(String),

    /// The input violates a standing hypothesis (dimension, genericity,
    /// local generation) or a computed invariant contradicts a proven
    /// identity.
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),

    #[error("no stabilization within s <= {cap} ({what})")]
    Stabilization { what: String, cap: usize },

    #[error("{0}")]
    Internal(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Validation(_) => 1,
            Error::Hypothesis(_) | Error::Stabilization { .. } => 2,
            Error::Internal(_) => 3,
        }
    }
}
