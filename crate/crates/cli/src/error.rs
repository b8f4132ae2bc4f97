use thiserror::Error;

/// Command failures, grouped by process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid transaction: {0}")]
    Invalid(String),
    #[error("double spend: {0}")]
    DoubleSpend(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::DoubleSpend(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<dringct::Error> for CliError {
    fn from(e: dringct::Error) -> Self {
        use dringct::Error as E;
        match e {
            E::DoubleSpend | E::DuplicateKeyImage => CliError::DoubleSpend(e.to_string()),
            E::Io(_) | E::Decode { .. } => CliError::Io(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
