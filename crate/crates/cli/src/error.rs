use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("kind=config field={field} reason={reason}")]
    Config { field: String, reason: String },
    #[error("kind=compute at={at} reason={reason}")]
    Compute { at: String, reason: String },
    #[error("kind=check check={check} reason={reason}")]
    Check { check: String, reason: String },
    #[error("kind=io path={path} reason={reason}")]
    Io { path: String, reason: String },
}

impl CliError {
    pub fn config(field: impl Into<String>, reason: impl ToString) -> Self {
        CliError::Config { field: field.into(), reason: reason.to_string() }
    }

    pub fn compute(at: impl Into<String>, reason: impl ToString) -> Self {
        CliError::Compute { at: at.into(), reason: reason.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            _ => 1,
        }
    }

    /// One line, `error: kind=... key=value ...`, with no embedded newlines.
    pub fn line(&self) -> String {
        format!("error: {self}").replace(['\n', '\r'], " ")
    }
}

impl From<pdm_osc_core::Error> for CliError {
    fn from(e: pdm_osc_core::Error) -> Self {
        CliError::compute("-", e)
    }
}
