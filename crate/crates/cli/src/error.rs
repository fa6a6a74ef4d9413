use std::path::Path;

use ddikge_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, config or paths (exit code 2).
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DATA: u8 = 3;
pub const EXIT_NUMERICAL: u8 = 4;

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self::Usage(message.into())
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self::Usage(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Core(e) => match e {
                CoreError::Config(_) | CoreError::Io { .. } => EXIT_USAGE,
                CoreError::Parse { .. }
                | CoreError::EmptyDataset(_)
                | CoreError::Split(_)
                | CoreError::Lookup(_)
                | CoreError::Evaluation(_)
                | CoreError::Checkpoint(_)
                | CoreError::Shape(_) => EXIT_DATA,
                CoreError::Training(_)
                | CoreError::Domain(_)
                | CoreError::Sampler(_)
                | CoreError::Oracle(_) => EXIT_NUMERICAL,
            },
        }
    }
}
