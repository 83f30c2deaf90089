//! Optimum references and competitive ratios.
//!
//! Two denominators are kept apart on purpose: the closed-form lower bound
//! `max(Sum/m, p_max)` and the true optimal makespan found by search.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algorithms::lpt_offline;
use crate::error::{Error, Result};
use crate::model::{apply_assignment, Instance, ScheduleOutcome};
use crate::rational::Rational;

/// Default number of search nodes `opt_exact` may expand.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptReference {
    pub lb_formula: Rational,
    pub exact: Rational,
    pub exact_assignment: Vec<usize>,
    #[serde(skip)]
    provenance: u64,
}

impl OptReference {
    pub fn provenance(&self) -> u64 {
        self.provenance
    }

    pub fn denominator(&self, kind: RatioKind) -> Rational {
        match kind {
            RatioKind::VsLbFormula => self.lb_formula,
            RatioKind::VsExact => self.exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RatioKind {
    #[serde(rename = "lb")]
    VsLbFormula,
    #[serde(rename = "exact")]
    VsExact,
}

impl RatioKind {
    pub const BOTH: [RatioKind; 2] = [RatioKind::VsLbFormula, RatioKind::VsExact];

    pub fn label(self) -> &'static str {
        match self {
            RatioKind::VsLbFormula => "lb",
            RatioKind::VsExact => "exact",
        }
    }
}

impl fmt::Display for RatioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for RatioKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "lb" => Ok(RatioKind::VsLbFormula),
            "exact" => Ok(RatioKind::VsExact),
            other => Err(format!("unknown ratio kind {other:?} (expected lb or exact)")),
        }
    }
}

/// `max(Sum/m, p_max)`.
pub fn opt_lower_bound(instance: &Instance) -> Rational {
    let share = instance.sum() / Rational::from(instance.machines());
    share.max(instance.pmax())
}

pub fn opt_exact(instance: &Instance) -> Result<OptReference> {
    opt_exact_with_budget(instance, DEFAULT_NODE_BUDGET)
}

/// Optimal makespan by depth-first branch and bound.
///
/// Sizes are scaled to integers by the common denominator. The incumbent
/// starts at the LPT schedule; a branch is cut when it cannot beat the
/// incumbent, and the search stops as soon as the incumbent meets
/// `max(ceil(Sum/m), p_max)`. Machines are tried in nondecreasing load order
/// and machines with an already tried load are skipped, which also pins the
/// first job to `M_1`.
pub fn opt_exact_with_budget(instance: &Instance, budget: u64) -> Result<OptReference> {
    let scale = instance.sizes().iter().fold(1i128, |acc, p| acc.lcm(&p.denom()));
    let sizes: Vec<i128> = instance
        .sizes()
        .iter()
        .map(|p| p.numer() * (scale / p.denom()))
        .collect();
    let m = instance.machines();
    let total: i128 = sizes.iter().sum();
    let floor = sizes[0].max(Integer::div_ceil(&total, &(m as i128)));

    let lpt = lpt_offline(instance);
    let mut search = Search {
        sizes: &sizes,
        loads: vec![0; m],
        current: vec![0; sizes.len()],
        best: (lpt.makespan * Rational::from_integer(scale)).numer(),
        best_assignment: lpt.assignment,
        floor,
        nodes: 0,
        budget,
    };
    if search.best > floor {
        search.descend(0)?;
    }

    let exact = Rational::new(search.best, scale);
    Ok(OptReference {
        lb_formula: opt_lower_bound(instance),
        exact,
        exact_assignment: search.best_assignment,
        provenance: instance.provenance(),
    })
}

struct Search<'a> {
    sizes: &'a [i128],
    loads: Vec<i128>,
    current: Vec<usize>,
    best: i128,
    best_assignment: Vec<usize>,
    floor: i128,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Returns `Ok(true)` once the incumbent is provably optimal.
    fn descend(&mut self, job: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SearchBudgetExceeded { budget: self.budget });
        }
        if job == self.sizes.len() {
            let makespan = *self.loads.iter().max().expect("m >= 2");
            if makespan < self.best {
                self.best = makespan;
                self.best_assignment = self.current.iter().map(|j| j + 1).collect();
            }
            return Ok(self.best <= self.floor);
        }
        let p = self.sizes[job];
        let mut order: Vec<usize> = (0..self.loads.len()).collect();
        order.sort_by_key(|&j| (self.loads[j], j));
        let mut tried: Option<i128> = None;
        for j in order {
            let load = self.loads[j];
            if tried == Some(load) {
                continue;
            }
            tried = Some(load);
            if load + p >= self.best {
                // Loads are visited in increasing order, nothing further fits either.
                break;
            }
            self.loads[j] += p;
            self.current[job] = j;
            let done = self.descend(job + 1)?;
            self.loads[j] -= p;
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Plain enumeration of all `m^n` assignments, in exact arithmetic and with no
/// pruning. Independent cross-check for [`opt_exact`]; the witness is the
/// first minimum in odometer order.
pub fn opt_exact_exhaustive(instance: &Instance) -> OptReference {
    let m = instance.machines();
    let n = instance.len();
    let mut digits = vec![0usize; n];
    let mut best: Option<(Rational, Vec<usize>)> = None;
    loop {
        let mut loads = vec![Rational::ZERO; m];
        for (p, &j) in instance.sizes().iter().zip(&digits) {
            loads[j] += *p;
        }
        let makespan = loads.into_iter().max().expect("m >= 2");
        if best.as_ref().is_none_or(|(b, _)| makespan < *b) {
            best = Some((makespan, digits.iter().map(|j| j + 1).collect()));
        }
        // Advance the odometer; the last job is the fastest digit.
        let mut pos = n;
        loop {
            if pos == 0 {
                let (exact, exact_assignment) = best.expect("at least one assignment");
                return OptReference {
                    lb_formula: opt_lower_bound(instance),
                    exact,
                    exact_assignment,
                    provenance: instance.provenance(),
                };
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < m {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// `makespan / denominator`, exactly.
pub fn competitive_ratio(outcome: &ScheduleOutcome, reference: &OptReference, kind: RatioKind) -> Result<Rational> {
    if outcome.provenance() != reference.provenance() {
        return Err(Error::MismatchedInstance);
    }
    Ok(outcome.makespan / reference.denominator(kind))
}

/// Checks that the witness assignment really achieves `exact`.
pub fn witness_makespan(instance: &Instance, reference: &OptReference) -> Result<Rational> {
    Ok(apply_assignment(instance, &reference.exact_assignment)?.makespan)
}
