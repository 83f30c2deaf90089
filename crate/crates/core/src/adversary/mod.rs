//! Adversary games, lower-bound families and empirical audits.

pub mod audit;
pub mod enumerate;
pub mod families;
pub mod tree;

pub use audit::{
    audit_load_hypothesis, audit_upper_bound, audit_upper_bound_with, AuditOptions, AuditReport, AuditWitness,
    DenominatorResult, LoadHypothesisReport, PatternBreakdown, SkipCounts, Verdict,
};
pub use enumerate::{enumerate_decreasing_instances, gen_i1, partitions, EnumerationDomain, PatternFilter};
pub use families::{theorem1_tree, theorem2_tree, theorem6_subcase_tree, theorem6_tree};
pub use tree::{minimax_value, solve_minimax, AdversaryTree, GameMove, MinimaxSolution, Node, TreeSummary};
