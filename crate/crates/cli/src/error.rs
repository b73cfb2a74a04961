use std::path::PathBuf;

/// Failures of a run, grouped by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{context}: {message}")]
    Compute { context: &'static str, message: String },
    #[error("manifest mismatch: {0}")]
    ManifestMismatch(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// `0` ok, `2` configuration or usage, `3` computation, `4` i/o.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Usage(_) | CliError::ManifestMismatch(_) => 2,
            CliError::Compute { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn compute(context: &'static str, e: impl std::fmt::Display) -> Self {
        CliError::Compute { context, message: e.to_string() }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Attach a module context to library errors.
pub trait Context<T> {
    fn context(self, module: &'static str) -> Result<T>;
}

impl<T, E: std::fmt::Display> Context<T> for std::result::Result<T, E> {
    fn context(self, module: &'static str) -> Result<T> {
        self.map_err(|e| CliError::compute(module, e))
    }
}
