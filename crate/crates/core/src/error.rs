use thiserror::Error;

/// Errors raised by the engine.
///
/// `Input` covers malformed or out-of-contract arguments supplied by a
/// caller. `Contract` marks a broken internal invariant (a differential that
/// does not square to zero, a non-commuting square, a failed snake-lemma
/// lift); seeing one means a bug, not bad input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Dimension(_) => 1,
            Error::Contract(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
