use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] permclass::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for usage and parse problems, 3 when a size or memory limit refused the run.
    pub fn exit_code(&self) -> i32 {
        use permclass::Error as E;
        match self {
            CliError::Core(E::TooLarge { .. } | E::InsufficientMemory { .. } | E::ClassTooLarge(_)) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
