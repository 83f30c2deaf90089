//! Subcommands. Each returns a report ready to serialize.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use semisched::adversary::{
    audit_upper_bound_with, solve_minimax, theorem1_tree, theorem2_tree, theorem6_tree, AdversaryTree, AuditOptions,
    EnumerationDomain, PatternFilter,
};
use semisched::oracle::opt_exact_with_budget;
use semisched::{competitive_ratio, opt_lower_bound, run_online, PolicyKind, RatioKind, Rational};

use crate::input::InstanceFile;
use crate::report::{decimal, AuditEnvelope, InstanceEcho, LowerBoundReport, RatioEntry, RunReport, REPORT_VERSION};
use crate::{CliError, CliResult};

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a policy on an instance file.
    Run(RunArgs),
    /// Solve an adversary lower-bound family.
    Lowerbound(LowerBoundArgs),
    /// Check a claimed competitive ratio on every instance of a finite domain.
    Audit(AuditArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RatioChoice {
    Lb,
    Exact,
    Both,
}

impl RatioChoice {
    fn kinds(self) -> &'static [RatioKind] {
        match self {
            RatioChoice::Lb => &[RatioKind::VsLbFormula],
            RatioChoice::Exact => &[RatioKind::VsExact],
            RatioChoice::Both => &RatioKind::BOTH,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SingleRatio {
    Lb,
    Exact,
}

impl From<SingleRatio> for RatioKind {
    fn from(r: SingleRatio) -> Self {
        match r {
            SingleRatio::Lb => RatioKind::VsLbFormula,
            SingleRatio::Exact => RatioKind::VsExact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    T1,
    T2,
    T6,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_parser = parse_policy)]
    pub algo: PolicyKind,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub ratio: RatioChoice,
    /// Include the per-job trace.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Clone, Args)]
pub struct LowerBoundArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Total size for t1 and t2.
    #[arg(long)]
    pub k: Option<Rational>,
    #[arg(long, value_enum, default_value = "lb")]
    pub ratio: SingleRatio,
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    #[arg(long, value_parser = parse_policy)]
    pub algo: PolicyKind,
    /// Defaults to the machine count the policy is defined for.
    #[arg(long)]
    pub machines: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
    #[arg(long, default_value_t = 1)]
    pub sum_min: u64,
    #[arg(long, default_value_t = 24)]
    pub sum_max: u64,
    #[arg(long, default_value_t = 1)]
    pub size_min: u64,
    #[arg(long)]
    pub size_max: Option<u64>,
    /// Keep only instances whose smallest job is at least this fraction of Sum.
    #[arg(long)]
    pub last_size_fraction: Option<Rational>,
    #[arg(long, default_value = "decr")]
    pub pattern: PatternFilter,
    #[arg(long, value_enum, default_value = "lb")]
    pub ratio: SingleRatio,
    #[arg(long)]
    pub claimed: Rational,
    /// Worker threads; the report does not depend on this.
    #[arg(long)]
    pub parallel: Option<usize>,
}

fn parse_policy(s: &str) -> Result<PolicyKind, String> {
    s.parse()
}

pub fn run(args: &RunArgs, node_budget: u64) -> CliResult<RunReport> {
    let instance = InstanceFile::read(&args.input)?.to_instance()?;
    let outcome = run_online(&instance, args.algo)?;
    let kinds = args.ratio.kinds();
    let lb = opt_lower_bound(&instance);
    let reference = if kinds.contains(&RatioKind::VsExact) {
        Some(opt_exact_with_budget(&instance, node_budget)?)
    } else {
        None
    };
    let ratios = kinds
        .iter()
        .map(|&k| {
            let value = match &reference {
                Some(r) => competitive_ratio(&outcome, r, k)?,
                None => outcome.makespan / lb,
            };
            Ok(RatioEntry::new(k, value))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(RunReport {
        report_version: REPORT_VERSION,
        policy: args.algo,
        instance: InstanceEcho {
            machines: instance.machines(),
            sizes: instance.sizes().to_vec(),
            sum: instance.sum(),
        },
        pattern: instance.pattern(),
        assignment: outcome.assignment,
        loads: outcome.loads,
        makespan: outcome.makespan,
        opt_lb_formula: lb,
        opt_exact: reference.as_ref().map(|r| r.exact),
        opt_exact_assignment: reference.map(|r| r.exact_assignment),
        ratios,
        trace: args.trace.then_some(outcome.trace),
    })
}

pub fn lowerbound(args: &LowerBoundArgs) -> CliResult<LowerBoundReport> {
    let need_k = || {
        args.k
            .ok_or_else(|| CliError::Invalid("--k is required for families t1 and t2".into()))
    };
    let tree: AdversaryTree = match args.family {
        Family::T1 => theorem1_tree(need_k()?)?,
        Family::T2 => theorem2_tree(need_k()?)?,
        Family::T6 => {
            if args.k.is_some() {
                return Err(CliError::Invalid("--k does not apply to family t6".into()));
            }
            theorem6_tree()?
        }
    };
    let kind = RatioKind::from(args.ratio);
    let solution = solve_minimax(&tree, kind)?;
    Ok(LowerBoundReport {
        report_version: REPORT_VERSION,
        family: tree.name.clone(),
        k: args.k,
        machines: tree.machines,
        declared_sum: tree.declared_sum,
        ratio_kind: kind,
        tree: tree.summary(),
        value: solution.value,
        value_decimal: decimal(solution.value),
        principal_line: solution.principal_line,
        final_sizes: solution.final_sizes,
        final_assignment: solution.final_assignment,
    })
}

pub fn audit(args: &AuditArgs, node_budget: u64) -> CliResult<AuditEnvelope> {
    let machines = match (args.machines, args.algo.required_machines()) {
        (Some(m), _) => m,
        (None, Some(m)) => m,
        (None, None) => return Err(CliError::Invalid(format!("--machines is required for {}", args.algo))),
    };
    let mut domain = EnumerationDomain::new(machines, args.n_min, args.n_max, args.sum_max, args.pattern)
        .with_sum_min(args.sum_min)
        .with_size_min(args.size_min);
    if let Some(cap) = args.size_max {
        domain = domain.with_size_max(cap);
    }
    if let Some(f) = args.last_size_fraction {
        domain = domain.with_last_size_fraction(f);
    }
    if args.parallel == Some(0) {
        return Err(CliError::Invalid("--parallel must be at least 1".into()));
    }
    let options = AuditOptions {
        node_budget,
        threads: args.parallel,
    };
    let report = audit_upper_bound_with(args.algo, &domain, args.ratio.into(), args.claimed, &options)?;
    Ok(AuditEnvelope::new(report))
}
