use thiserror::Error;

/// Exit status 0: success.
pub const EXIT_OK: i32 = 0;
/// Exit status 1: a selected check failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status 2: invalid configuration or unmet precondition.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status 3: the function violates a hypothesis.
pub const EXIT_HYPOTHESIS: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] asymprod::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use asymprod::Error as E;
        match self {
            CliError::Core(
                E::HypothesisViolation(_)
                | E::PositivityViolation { .. }
                | E::ClosureViolation { .. }
                | E::NoValidEpsilon { .. }
                | E::EvaluationDomain { .. },
            ) => EXIT_HYPOTHESIS,
            _ => EXIT_CONFIG,
        }
    }
}
