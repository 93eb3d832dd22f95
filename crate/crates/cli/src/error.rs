use std::fmt;
use std::process::ExitCode;

/// Failures surfaced to the user, one per exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad command line or an argument outside its domain (exit 1).
    Usage(String),
    /// Unreadable or invalid input, or a violated state invariant (exit 2).
    Input(String),
    /// A numerical kernel failed (exit 3).
    Numeric(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Numeric(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<gme_core::Error> for CliError {
    fn from(e: gme_core::Error) -> Self {
        match e {
            gme_core::Error::Numeric(_) => CliError::Numeric(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}
