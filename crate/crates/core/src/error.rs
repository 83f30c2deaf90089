use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("instance has no jobs")]
    EmptyInstance,

    /// `index` is 1-based, matching job numbering.
    #[error("job {index} has non-positive size {size}")]
    NonPositiveSize { index: usize, size: Rational },

    #[error("job sizes must be non-increasing: p{} = {next} > p{} = {prev}", .index, .index - 1)]
    NotNonIncreasing {
        index: usize,
        prev: Rational,
        next: Rational,
    },

    #[error("at least 2 machines are required, got {0}")]
    MachineCountTooSmall(usize),

    #[error("assignment has {found} entries but the instance has {expected} jobs")]
    LengthMismatch { expected: usize, found: usize },

    #[error("job {job} assigned to machine {machine}, valid range is 1..={machines}")]
    MachineIndexOutOfRange {
        job: usize,
        machine: usize,
        machines: usize,
    },

    #[error("policy {policy} requires {required} machines, instance has {found}")]
    MachineCountMismatch {
        policy: String,
        required: usize,
        found: usize,
    },

    #[error("SD has no rule for job {job}: {detail}")]
    UnspecifiedBranch { job: usize, detail: String },

    #[error("exact search exceeded its budget of {budget} nodes; use a smaller instance")]
    SearchBudgetExceeded { budget: u64 },

    #[error("schedule and optimum reference come from different instances")]
    MismatchedInstance,

    #[error("family parameter k = {k} out of range: {requirement}")]
    KOutOfRange { k: Rational, requirement: &'static str },

    #[error("invalid enumeration domain: {0}")]
    InvalidDomain(String),

    #[error("invalid adversary tree: {0}")]
    InvalidTree(String),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
}
