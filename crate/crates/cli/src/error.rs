use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] ceiling_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("verification failed: {0}")]
    Verify(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 for bad input, 3 for numerical failure, 1 for a manifest mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Config(_) | CliError::Core(_) | CliError::Io { .. } => 2,
            CliError::Verify(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
