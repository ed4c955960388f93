use std::fmt;

/// Failure of a command, carrying its exit status.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Malformed or missing input: exit 2.
    Usage(String),
    /// Valid input rejected by the library or a failed computation: exit 1.
    Domain(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ewl::Error> for CliError {
    fn from(e: ewl::Error) -> Self {
        match e {
            ewl::Error::Config(_) => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Domain(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Domain(format!("csv error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
