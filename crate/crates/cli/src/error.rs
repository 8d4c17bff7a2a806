use std::path::PathBuf;

use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid run configuration, anchored to a line of the config file.
    #[error("{}:{line}: {message}", path.display())]
    Config { path: PathBuf, line: usize, message: String },
    /// Unreadable or inconsistent input file (config or circuit).
    #[error("{}: {message}", path.display())]
    Input { path: PathBuf, message: String },
    /// The brute-force oracle refuses problems above its size cap.
    #[error("oracle size cap: {0}")]
    OracleCap(String),
    #[error(transparent)]
    Core(#[from] qas_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// Process exit status: 2 for bad input, 3 for numeric failures, 4 for
    /// oracle size caps, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        use qas_core::Error as E;
        match self {
            CliError::Config { .. } | CliError::Input { .. } => 2,
            CliError::OracleCap(_) => 4,
            CliError::Core(E::Numeric(_) | E::DegenerateSystem(_)) => 3,
            CliError::Core(E::Io(_)) | CliError::Io { .. } => 1,
            CliError::Core(_) => 2,
        }
    }

    pub(crate) fn input(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        CliError::Input { path: path.into(), message: message.to_string() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}
