//! Semi-online makespan scheduling on identical machines when the jobs arrive
//! in non-increasing size order and their total size is known up front.
//!
//! Sizes are exact rationals throughout. The crate provides the online
//! policies, an exact optimum oracle, adversary game trees for lower bounds,
//! and exhaustive audits of claimed upper bounds.

pub mod adversary;
pub mod algorithms;
pub mod error;
pub mod model;
pub mod oracle;
pub mod rational;

pub use algorithms::{lpt_offline, run_online, OnlineScheduler, PolicyKind, PolicyState};
pub use error::{Error, Result};
pub use model::{apply_assignment, classify_pattern, Instance, Loads, PatternClass, ScheduleOutcome, TraceStep};
pub use oracle::{competitive_ratio, opt_exact, opt_exact_with_budget, opt_lower_bound, OptReference, RatioKind};
pub use rational::Rational;
