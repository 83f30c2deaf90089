//! Empirical upper-bound audits over enumerated domains.
//!
//! Every instance of the domain is scheduled by the policy and compared
//! against both optimum references. The reduction is sequential over results
//! kept in enumeration order, so the report does not depend on how many
//! worker threads evaluated the instances.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::{run_online, PolicyKind};
use crate::error::{Error, Result};
use crate::model::{Instance, PatternClass, ScheduleOutcome};
use crate::oracle::{competitive_ratio, opt_exact_with_budget, RatioKind, DEFAULT_NODE_BUDGET};
use crate::rational::Rational;

use super::enumerate::{enumerate_decreasing_instances, EnumerationDomain};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditOptions {
    pub node_budget: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    ConfirmedOnDomain,
    CounterexampleFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditWitness {
    pub machines: usize,
    pub sizes: Vec<Rational>,
    pub pattern: PatternClass,
    pub ratio: Rational,
    pub opt_lb_formula: Rational,
    pub opt_exact: Rational,
    pub outcome: ScheduleOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DenominatorResult {
    pub kind: RatioKind,
    pub worst_ratio: Option<Rational>,
    pub verdict: Verdict,
    /// Instances whose ratio is strictly above the claimed bound.
    pub exceeding_claim: u64,
    pub witness: Option<AuditWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternBreakdown {
    pub pattern: PatternClass,
    pub instances: u64,
    pub worst_vs_lb: Rational,
    pub worst_vs_lb_sizes: Vec<Rational>,
    pub worst_vs_exact: Rational,
    pub worst_vs_exact_sizes: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SkipCounts {
    pub search_budget_exceeded: u64,
    pub unspecified_branch: u64,
}

impl SkipCounts {
    pub fn total(&self) -> u64 {
        self.search_budget_exceeded + self.unspecified_branch
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub policy: PolicyKind,
    pub domain: EnumerationDomain,
    pub ratio_kind: RatioKind,
    pub claimed: Rational,
    pub worst_ratio: Option<Rational>,
    pub verdict: Verdict,
    pub witness: Option<AuditWitness>,
    pub instances_examined: u64,
    pub instances_skipped: SkipCounts,
    pub per_pattern: Vec<PatternBreakdown>,
    pub by_denominator: Vec<DenominatorResult>,
}

impl AuditReport {
    pub fn denominator(&self, kind: RatioKind) -> &DenominatorResult {
        self.by_denominator
            .iter()
            .find(|d| d.kind == kind)
            .expect("both denominators are always reported")
    }
}

struct Evaluated {
    instance: Instance,
    outcome: ScheduleOutcome,
    lb: Rational,
    exact: Rational,
    ratio_lb: Rational,
    ratio_exact: Rational,
}

impl Evaluated {
    fn ratio(&self, kind: RatioKind) -> Rational {
        match kind {
            RatioKind::VsLbFormula => self.ratio_lb,
            RatioKind::VsExact => self.ratio_exact,
        }
    }

    fn witness(&self, kind: RatioKind) -> AuditWitness {
        AuditWitness {
            machines: self.instance.machines(),
            sizes: self.instance.sizes().to_vec(),
            pattern: self.instance.pattern(),
            ratio: self.ratio(kind),
            opt_lb_formula: self.lb,
            opt_exact: self.exact,
            outcome: self.outcome.clone(),
        }
    }
}

enum Evaluation {
    Done(Box<Evaluated>),
    BudgetExceeded,
    Unspecified,
}

fn evaluate(policy: PolicyKind, instance: Instance, budget: u64) -> Result<Evaluation> {
    let outcome = match run_online(&instance, policy) {
        Ok(o) => o,
        Err(Error::UnspecifiedBranch { .. }) => return Ok(Evaluation::Unspecified),
        Err(e) => return Err(e),
    };
    let reference = match opt_exact_with_budget(&instance, budget) {
        Ok(r) => r,
        Err(Error::SearchBudgetExceeded { .. }) => return Ok(Evaluation::BudgetExceeded),
        Err(e) => return Err(e),
    };
    let ratio_lb = competitive_ratio(&outcome, &reference, RatioKind::VsLbFormula)?;
    let ratio_exact = competitive_ratio(&outcome, &reference, RatioKind::VsExact)?;
    Ok(Evaluation::Done(Box::new(Evaluated {
        lb: reference.lb_formula,
        exact: reference.exact,
        instance,
        outcome,
        ratio_lb,
        ratio_exact,
    })))
}

/// Higher ratio wins; equal ratios go to the lexicographically smaller size
/// sequence.
fn beats(candidate: (Rational, &[Rational]), incumbent: Option<(Rational, &[Rational])>) -> bool {
    match incumbent {
        None => true,
        Some((ratio, sizes)) => match candidate.0.cmp(&ratio) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => candidate.1 < sizes,
        },
    }
}

fn run_parallel<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidDomain(format!("cannot start {n} worker threads: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

pub fn audit_upper_bound(
    policy: PolicyKind,
    domain: &EnumerationDomain,
    kind: RatioKind,
    claimed: Rational,
) -> Result<AuditReport> {
    audit_upper_bound_with(policy, domain, kind, claimed, &AuditOptions::default())
}

pub fn audit_upper_bound_with(
    policy: PolicyKind,
    domain: &EnumerationDomain,
    kind: RatioKind,
    claimed: Rational,
    options: &AuditOptions,
) -> Result<AuditReport> {
    domain.validate()?;
    policy.check_machines(domain.machines)?;
    let instances: Vec<Instance> = enumerate_decreasing_instances(domain)?.collect();
    let budget = options.node_budget;
    let results: Vec<Result<Evaluation>> = run_parallel(options.threads, || {
        instances
            .into_par_iter()
            .map(|instance| evaluate(policy, instance, budget))
            .collect()
    })?;

    let mut examined = 0u64;
    let mut skipped = SkipCounts::default();
    let mut worst: [Option<&Evaluated>; 2] = [None, None];
    let mut exceeding = [0u64; 2];
    let mut patterns: Vec<(PatternClass, u64, [&Evaluated; 2])> = Vec::new();
    let evaluated: Vec<Evaluation> = results.into_iter().collect::<Result<_>>()?;
    for evaluation in &evaluated {
        let ev = match evaluation {
            Evaluation::Done(ev) => ev.as_ref(),
            Evaluation::BudgetExceeded => {
                skipped.search_budget_exceeded += 1;
                continue;
            }
            Evaluation::Unspecified => {
                skipped.unspecified_branch += 1;
                continue;
            }
        };
        examined += 1;
        for (count, k) in exceeding.iter_mut().zip(RatioKind::BOTH) {
            if ev.ratio(k) > claimed {
                *count += 1;
            }
        }
        for (slot, k) in worst.iter_mut().zip(RatioKind::BOTH) {
            let incumbent = slot.map(|w| (w.ratio(k), w.instance.sizes()));
            if beats((ev.ratio(k), ev.instance.sizes()), incumbent) {
                *slot = Some(ev);
            }
        }
        let pattern = ev.instance.pattern();
        match patterns.iter_mut().find(|(p, _, _)| *p == pattern) {
            Some((_, count, best)) => {
                *count += 1;
                for (slot, k) in best.iter_mut().zip(RatioKind::BOTH) {
                    if beats(
                        (ev.ratio(k), ev.instance.sizes()),
                        Some((slot.ratio(k), slot.instance.sizes())),
                    ) {
                        *slot = ev;
                    }
                }
            }
            None => patterns.push((pattern, 1, [ev, ev])),
        }
    }
    patterns.sort_by_key(|(p, _, _)| *p);

    let by_denominator: Vec<DenominatorResult> = RatioKind::BOTH
        .iter()
        .zip(worst)
        .zip(exceeding)
        .map(|((&k, w), exceeding_claim)| {
            let worst_ratio = w.map(|ev| ev.ratio(k));
            DenominatorResult {
                kind: k,
                worst_ratio,
                verdict: if worst_ratio.is_none_or(|r| r <= claimed) {
                    Verdict::ConfirmedOnDomain
                } else {
                    Verdict::CounterexampleFound
                },
                exceeding_claim,
                witness: w.map(|ev| ev.witness(k)),
            }
        })
        .collect();
    let headline = by_denominator
        .iter()
        .find(|d| d.kind == kind)
        .expect("both kinds present")
        .clone();

    Ok(AuditReport {
        policy,
        domain: domain.clone(),
        ratio_kind: kind,
        claimed,
        worst_ratio: headline.worst_ratio,
        verdict: headline.verdict,
        witness: headline.witness,
        instances_examined: examined,
        instances_skipped: skipped,
        per_pattern: patterns
            .into_iter()
            .map(|(pattern, instances, [lb, exact])| PatternBreakdown {
                pattern,
                instances,
                worst_vs_lb: lb.ratio_lb,
                worst_vs_lb_sizes: lb.instance.sizes().to_vec(),
                worst_vs_exact: exact.ratio_exact,
                worst_vs_exact_sizes: exact.instance.sizes().to_vec(),
            })
            .collect(),
        by_denominator,
    })
}

/// Result of testing `l_machine <= fraction * Sum` on final schedules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoadHypothesisReport {
    pub policy: PolicyKind,
    pub machine: usize,
    pub fraction: Rational,
    pub instances_checked: u64,
    pub violations: u64,
    pub first_violation: Option<Vec<Rational>>,
}

/// Counts final schedules whose load on `machine` exceeds `fraction * Sum`.
pub fn audit_load_hypothesis(
    policy: PolicyKind,
    domain: &EnumerationDomain,
    machine: usize,
    fraction: Rational,
) -> Result<LoadHypothesisReport> {
    policy.check_machines(domain.machines)?;
    if machine == 0 || machine > domain.machines {
        return Err(Error::InvalidDomain(format!(
            "machine {machine} outside 1..={}",
            domain.machines
        )));
    }
    let mut report = LoadHypothesisReport {
        policy,
        machine,
        fraction,
        instances_checked: 0,
        violations: 0,
        first_violation: None,
    };
    for instance in enumerate_decreasing_instances(domain)? {
        let outcome = match run_online(&instance, policy) {
            Ok(o) => o,
            Err(Error::UnspecifiedBranch { .. }) => continue,
            Err(e) => return Err(e),
        };
        report.instances_checked += 1;
        if outcome.loads.of(machine) > fraction * instance.sum() {
            report.violations += 1;
            report.first_violation.get_or_insert_with(|| instance.sizes().to_vec());
        }
    }
    Ok(report)
}
