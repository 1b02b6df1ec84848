use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CERTIFIED: i32 = 0;
    pub const NOT_CERTIFIED: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const PRECONDITION: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed state-set document; `location` is a JSON path or `line:column`.
    #[error("invalid document at {location}: {message}")]
    Document { location: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Core(nonloc_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Precondition(_) => exit::PRECONDITION,
            CliError::Core(e) if is_precondition(e) => exit::PRECONDITION,
            _ => exit::INPUT,
        }
    }

    pub fn document(location: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Document { location: location.into(), message: message.into() }
    }
}

fn is_precondition(e: &nonloc_core::Error) -> bool {
    matches!(e, nonloc_core::Error::NotOrthonormal { .. } | nonloc_core::Error::Precondition(_))
}

impl From<nonloc_core::Error> for CliError {
    fn from(e: nonloc_core::Error) -> Self {
        match e {
            nonloc_core::Error::NotOrthonormal { i, j, deviation } => CliError::Precondition(format!(
                "states are not orthonormal: |G[{i},{j}] - δ| = {deviation:.3e} (indices zero-based)"
            )),
            other => CliError::Core(other),
        }
    }
}
