//! JSON plumbing and command implementations behind the `semisched` binary.
//!
//! Commands return serializable reports; the binary only parses flags,
//! prints the report and maps errors to exit codes.

pub mod commands;
pub mod input;
pub mod report;

use semisched::Error;

/// Exit code for parse and validation failures.
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_MACHINE_MISMATCH: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
/// The policy reached a state it does not define (SD only).
pub const EXIT_UNSPECIFIED: i32 = 5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid instance file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::MachineCountMismatch { .. }) => EXIT_MACHINE_MISMATCH,
            CliError::Core(Error::SearchBudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Core(Error::UnspecifiedBranch { .. }) => EXIT_UNSPECIFIED,
            _ => EXIT_INVALID,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Reads `SEMISCHED_NODE_BUDGET`, falling back to the library default.
pub fn node_budget_from_env() -> CliResult<u64> {
    match std::env::var("SEMISCHED_NODE_BUDGET") {
        Ok(raw) => raw.trim().parse().map_err(|_| {
            CliError::Invalid(format!(
                "SEMISCHED_NODE_BUDGET must be a non-negative integer, got {raw:?}"
            ))
        }),
        Err(_) => Ok(semisched::oracle::DEFAULT_NODE_BUDGET),
    }
}
