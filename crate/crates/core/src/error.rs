use thiserror::Error;

/// Errors raised by the closed-form algebra, the test-function machinery and
/// the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violates a precondition of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine failed to produce a usable value.
    #[error("computation error: {0}")]
    Computation(String),

    /// A simulation was configured inconsistently.
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn computation(msg: impl Into<String>) -> Self {
        Error::Computation(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
