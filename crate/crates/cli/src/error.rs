use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 3,
            _ => 2,
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    /// Wraps a library error with the step that produced it.
    pub fn lib(context: &str, e: corrspec::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(format!("{context}: {e}"))
        } else {
            CliError::Validation(format!("{context}: {e}"))
        }
    }
}

pub(crate) trait Context<T> {
    fn ctx(self, context: &str) -> CliResult<T>;
}

impl<T> Context<T> for corrspec::Result<T> {
    fn ctx(self, context: &str) -> CliResult<T> {
        self.map_err(|e| CliError::lib(context, e))
    }
}
