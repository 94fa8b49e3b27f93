use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Requested qubit count exceeds what the dense simulator supports.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// A caller broke an operation's precondition (lengths, indices, ranges).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The architecture cannot be realized (block width does not divide R, ...).
    #[error("architecture error: {0}")]
    Architecture(String),

    /// A sampling grid is too coarse for the frequencies it must resolve.
    #[error("aliasing error: {0}")]
    Aliasing(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Training produced a non-finite loss.
    #[error("training diverged at epoch {epoch}")]
    Divergence {
        epoch: usize,
        last_finite_loss: Option<f64>,
    },

    #[error("{}:{line}: {message}", file.display())]
    Format {
        file: PathBuf,
        line: usize,
        message: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn architecture(msg: impl Into<String>) -> Self {
        Error::Architecture(msg.into())
    }
}
