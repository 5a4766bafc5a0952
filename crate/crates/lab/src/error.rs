use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("computation failed in {context}: {source}")]
    Compute {
        context: &'static str,
        source: gauge_energy_core::Error,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl LabError {
    /// Process exit code: configuration and environment problems map to 2,
    /// failures inside a computation to 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Compute { .. } => 1,
            _ => 2,
        }
    }
}

/// Attaches a context label to core errors.
pub(crate) trait Context<T> {
    fn context(self, context: &'static str) -> Result<T, LabError>;
}

impl<T> Context<T> for Result<T, gauge_energy_core::Error> {
    fn context(self, context: &'static str) -> Result<T, LabError> {
        self.map_err(|source| LabError::Compute { context, source })
    }
}
