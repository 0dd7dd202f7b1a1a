use thiserror::Error;

/// Failures of a command; `exit_code` maps them onto the process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Domain(#[from] slag_core::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Every error exits with 2; status 1 is reserved for failed checks, which
    /// are reported through `Output::passed` instead.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
