use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid {field}: {message}")]
    Usage { field: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        #[source]
        source: hi_spectra::Error,
    },
    #[error(transparent)]
    Pipeline(#[from] hi_spectra::Error),
    #[error("error bound violated: {0}")]
    BoundViolation(String),
}

impl CliError {
    pub fn usage(field: &str, message: impl Into<String>) -> Self {
        CliError::Usage { field: field.into(), message: message.into() }
    }
}
