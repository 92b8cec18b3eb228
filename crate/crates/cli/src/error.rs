use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Core(#[from] dunkl_kg::Error),

    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{failed} of {total} verification checks failed")]
    Verification { failed: usize, total: usize },
}

impl CliError {
    /// 1 for bad input or I/O, 2 for failed verification.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Verification { .. } => 2,
            _ => 1,
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}
