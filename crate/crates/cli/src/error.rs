use thiserror::Error;

/// CLI failure, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Exit code 1.
    #[error("verification failed: {0}")]
    Verification(String),
    /// Exit code 2.
    #[error("{0}")]
    Usage(String),
    /// Exit code 3.
    #[error("{0}")]
    BlowUp(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Verification(_) => 1,
            Self::Usage(_) => 2,
            Self::BlowUp(_) => 3,
        }
    }
}

impl From<viscospec::Error> for CliError {
    fn from(e: viscospec::Error) -> Self {
        match e {
            viscospec::Error::BlowUp { .. } => Self::BlowUp(e.to_string()),
            other => Self::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Usage(format!("i/o error: {e}"))
    }
}
