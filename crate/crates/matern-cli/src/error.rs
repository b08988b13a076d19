use thiserror::Error;

/// Failure classes, each with its own process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or parameter combinations.
    #[error("{0}")]
    Usage(String),
    /// Unreadable or malformed input, or an output that cannot be written.
    #[error("{0}")]
    Data(String),
    /// A computation failed on valid input.
    #[error("{0}")]
    Numerical(String),
    #[error("audit tolerance exceeded: max relative error {got:.3e} > {tolerance:.3e}")]
    AuditExceeded { got: f64, tolerance: f64 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::AuditExceeded { .. } => 4,
        }
    }
}

impl From<matern::Error> for CliError {
    fn from(e: matern::Error) -> Self {
        use matern::Error as E;
        match e {
            E::InvalidParams(_) | E::Config(_) => CliError::Usage(e.to_string()),
            E::LengthMismatch { .. } => CliError::Data(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn io_error(path: &std::path::Path, e: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}
