//! File formats, reports, the `verify` suite and the command-line driver
//! for `pcc-core`.

pub mod cli;
pub mod formats;
pub mod random;
pub mod reports;
pub mod verify;

use std::path::Path;

pub use cli::run;
pub use formats::FormatError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] pcc_core::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 2 for usage and input errors, 3 for guards and work budgets, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Format { .. } | CliError::Io { .. } => 2,
            CliError::Core(e) if e.is_guard() => 3,
            CliError::Core(_) => 1,
        }
    }
}
