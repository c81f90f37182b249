use std::fmt;

/// Exit status for an invalid configuration.
pub const EXIT_CONFIG: u8 = 2;
/// Exit status for a property check that failed.
pub const EXIT_CHECK: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(std::io::Error),
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => 1,
            CliError::Check(_) => EXIT_CHECK,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "invalid configuration: {msg}"),
            CliError::Io(e) => write!(f, "io: {e}"),
            CliError::Check(msg) => write!(f, "check failed: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<poncelet_core::Error> for CliError {
    fn from(e: poncelet_core::Error) -> Self {
        use poncelet_core::Error as E;
        match e {
            E::InvalidConfig(msg) => CliError::Config(msg.into()),
            E::DegenerateTangency { .. } => CliError::Config(e.to_string()),
            _ => CliError::Check(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
