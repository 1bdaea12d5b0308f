use bragg_entanglement::Error as CoreError;
use thiserror::Error;

/// Failure of a CLI run, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad config, flags or unsupported request. Exit code 2.
    #[error("config error: {0}")]
    Config(String),
    /// Valid input that has no numerical answer. Exit code 3.
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub(crate) fn config(field: &str, err: impl std::fmt::Display) -> Self {
        CliError::Config(format!("{field}: {err}"))
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Unit(_)
            | CoreError::InvalidInput(_)
            | CoreError::ForwardBeam
            | CoreError::UnsupportedAnalytic(_)
            | CoreError::UnsupportedBasis { .. } => CliError::Config(e.to_string()),
            CoreError::DegenerateNormalization
            | CoreError::PositivityViolation(_)
            | CoreError::InvalidDensityMatrix(_)
            | CoreError::AlreadyDecohered(_)
            | CoreError::QuadratureAccuracy { .. }
            | CoreError::Domain(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        match e.classify() {
            serde_json::error::Category::Io => CliError::Io(e.into()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

pub type CliResult<T> = Result<T, CliError>;
