use std::io;

use halton_subseq::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] Error),
    /// An inequality or identity check came out false.
    #[error("check failed: {0}")]
    Failed(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e {
                Error::PrecisionExhausted { .. } => 3,
                Error::WorkBudgetExceeded { .. } => 4,
                Error::InsufficientConvergents { .. } | Error::IndexOverflow => 1,
                _ => 2,
            },
            CliError::Failed(_) => 5,
            CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}

pub(crate) fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
