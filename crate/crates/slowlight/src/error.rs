use std::path::Path;

use slowlight_core::Error as CoreError;

/// Failures of a CLI run, each with a fixed process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or invalid scenario, bad arguments, unwritable output.
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Degenerate(String),
    /// The time-domain oracle could not reach its accuracy target.
    #[error("{0}")]
    Convergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Degenerate(_) => 2,
            CliError::Convergence(_) => 3,
        }
    }

    /// Classify a core error, prefixing `context` (usually the field or section).
    pub fn core(context: &str, error: CoreError) -> Self {
        let message = if context.is_empty() {
            error.to_string()
        } else {
            format!("{context}: {error}")
        };
        match error {
            CoreError::DegenerateRegime(_) => CliError::Degenerate(message),
            CoreError::StepSizeTooCoarse { .. } | CoreError::NoPeak => CliError::Convergence(message),
            _ => CliError::Invalid(message),
        }
    }

    pub fn io(path: &Path, error: std::io::Error) -> Self {
        CliError::Invalid(format!("{}: {error}", path.display()))
    }

    pub(crate) fn output(error: std::io::Error) -> Self {
        CliError::Invalid(error.to_string())
    }

    pub(crate) fn csv(error: csv::Error) -> Self {
        CliError::Invalid(error.to_string())
    }
}
