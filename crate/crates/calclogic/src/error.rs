use thiserror::Error;

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("fixture `{name}`: {message}")]
    Malformed { name: String, message: String },

    #[error(transparent)]
    Core(#[from] calclogic_core::Error),
}

/// Failures of a command-line invocation, by exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or arguments (exit 64).
    #[error("{0}")]
    Usage(String),

    /// Unreadable or invalid input (exit 65).
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Data(_) => 65,
        }
    }
}

impl From<calclogic_core::Error> for CliError {
    fn from(e: calclogic_core::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<FixtureError> for CliError {
    fn from(e: FixtureError) -> Self {
        CliError::Data(e.to_string())
    }
}
