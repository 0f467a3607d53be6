use std::path::PathBuf;

/// Failure of a subcommand, classified by its stable exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error("{0}")]
    Runtime(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl From<dodoor_sim::Error> for CliError {
    fn from(e: dodoor_sim::Error) -> Self {
        use dodoor_sim::Error as E;
        match e {
            E::Io { path, source } => CliError::Io { path, source },
            E::InvalidConfig(_)
            | E::InvalidPreset(_)
            | E::UnknownFormat(_)
            | E::Parse { .. }
            | E::Validation(_)
            | E::ZeroCapacity
            | E::DuplicateNode(_)
            | E::UnschedulableTask { .. } => CliError::Validation(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
