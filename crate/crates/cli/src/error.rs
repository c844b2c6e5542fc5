use thiserror::Error;

/// Exit codes: 0 ok, 1 negative verdict, 2 validation, 3 inconsistency.
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INCONSISTENCY: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{origin}: invalid value at `{path}`: {message}")]
    Schema {
        origin: String,
        path: String,
        message: String,
    },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] qgraph::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(qgraph::Error::Inconsistency(_)) => EXIT_INCONSISTENCY,
            _ => EXIT_VALIDATION,
        }
    }
}
