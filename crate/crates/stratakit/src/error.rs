use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] strata_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
    /// A self test ran to completion and some criterion failed.
    #[error("self test failed: {0}")]
    SelfTest(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => e.exit_code(),
            CliError::SelfTest(_) => 3,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(strata_core::Error::WindowInsufficient(_)) => "window_insufficient",
            CliError::Core(strata_core::Error::Inconsistent(_)) => "inconsistent",
            CliError::Core(strata_core::Error::RelationsViolated(_)) => "relations_violated",
            CliError::Core(_) | CliError::Usage(_) => "invalid_input",
            CliError::Io(_) => "io",
            CliError::Json(_) => "invalid_json",
            CliError::SelfTest(_) => "selftest_failed",
        }
    }

    /// The machine-readable line printed on standard error.
    pub fn report(&self) -> String {
        json!({"error": self.kind(), "code": self.exit_code(), "message": self.to_string()}).to_string()
    }
}
