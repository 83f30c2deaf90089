//! Online policy engine.
//!
//! A policy sees one job at a time together with the declared total `Sum`
//! and the promise that sizes never increase. Each `step_*` function is the
//! pure decision rule of one policy; [`OnlineScheduler`] owns the state and
//! applies the decisions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, Loads, ScheduleOutcome, TraceStep};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "&'static str", try_from = "String")]
pub enum PolicyKind {
    /// Graham's list scheduling: least loaded machine, lowest index on ties.
    Ls,
    /// Longest processing time first (offline).
    Lpt,
    /// Tan and He's stopping-criteria algorithm for two machines.
    Sd,
    TwoDs,
    I2ds,
    ThreeDs,
    I3ds,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 7] = [
        PolicyKind::Ls,
        PolicyKind::Lpt,
        PolicyKind::Sd,
        PolicyKind::TwoDs,
        PolicyKind::I2ds,
        PolicyKind::ThreeDs,
        PolicyKind::I3ds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Ls => "ls",
            PolicyKind::Lpt => "lpt",
            PolicyKind::Sd => "sd",
            PolicyKind::TwoDs => "2ds",
            PolicyKind::I2ds => "i2ds",
            PolicyKind::ThreeDs => "3ds",
            PolicyKind::I3ds => "i3ds",
        }
    }

    /// Fixed machine count, or `None` for policies that accept any `m >= 2`.
    pub fn required_machines(self) -> Option<usize> {
        match self {
            PolicyKind::Sd | PolicyKind::TwoDs | PolicyKind::I2ds => Some(2),
            PolicyKind::ThreeDs | PolicyKind::I3ds => Some(3),
            PolicyKind::Ls | PolicyKind::Lpt => None,
        }
    }

    pub fn check_machines(self, machines: usize) -> Result<()> {
        match self.required_machines() {
            Some(required) if required != machines => Err(Error::MachineCountMismatch {
                policy: self.name().to_string(),
                required,
                found: machines,
            }),
            _ if machines < 2 => Err(Error::MachineCountTooSmall(machines)),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        PolicyKind::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown policy {s:?} (expected one of 2ds, i2ds, 3ds, i3ds, sd, ls, lpt)"))
    }
}

impl From<PolicyKind> for &'static str {
    fn from(p: PolicyKind) -> Self {
        p.name()
    }
}

impl TryFrom<String> for PolicyKind {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, Self::Error> {
        s.parse()
    }
}

/// Which SD rule routed the remaining jobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SdRule {
    /// `J_2` joined `J_1` on `M_1`.
    SecondJobFits,
    /// Some machine could take the job while staying within `5/9 Sum`.
    Criterion1,
    /// No machine could; the job went to the least loaded one.
    Criterion2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SdMode {
    Open,
    /// Every later job goes to `machine` (1-based).
    Designated {
        rule: SdRule,
        machine: usize,
    },
}

/// Machine a policy picked, plus an SD designation if one fires on this job.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SdDecision {
    pub machine: usize,
    pub designate: Option<(SdRule, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyState {
    loads: Loads,
    sum: Rational,
    jobs_seen: usize,
    sd_mode: SdMode,
}

impl PolicyState {
    pub fn new(machines: usize, sum: Rational) -> Self {
        PolicyState {
            loads: Loads::zeros(machines),
            sum,
            jobs_seen: 0,
            sd_mode: SdMode::Open,
        }
    }

    /// State with arbitrary current loads, for probing single decisions.
    pub fn with_loads(loads: Vec<Rational>, sum: Rational) -> Self {
        PolicyState {
            loads: Loads::from_vec(loads),
            sum,
            jobs_seen: 0,
            sd_mode: SdMode::Open,
        }
    }

    pub fn loads(&self) -> &Loads {
        &self.loads
    }

    /// Load of machine `machine` (1-based).
    pub fn load(&self, machine: usize) -> Rational {
        self.loads.of(machine)
    }

    pub fn sum(&self) -> Rational {
        self.sum
    }

    pub fn jobs_seen(&self) -> usize {
        self.jobs_seen
    }

    pub fn sd_mode(&self) -> SdMode {
        self.sd_mode
    }

    fn commit(&mut self, machine: usize, size: Rational) {
        self.loads.add(machine, size);
        self.jobs_seen += 1;
    }
}

fn frac(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

/// Algorithm 2DS: `M_1` while it stays within half of `Sum`.
pub fn step_2ds(state: &PolicyState, p: Rational) -> usize {
    if state.load(1) + p <= frac(1, 2) * state.sum {
        1
    } else {
        2
    }
}

/// Algorithm I2DS: `M_1` while it stays within `7/12 Sum`.
pub fn step_i2ds(state: &PolicyState, p: Rational) -> usize {
    if state.load(1) + p <= frac(7, 12) * state.sum {
        1
    } else {
        2
    }
}

/// Algorithm 3DS: `M_1` up to `Sum/3`, otherwise the lighter of `M_2`, `M_3`
/// (`M_2` on ties).
pub fn step_3ds(state: &PolicyState, p: Rational) -> usize {
    if state.load(1) + p <= frac(1, 3) * state.sum {
        1
    } else if state.load(2) <= state.load(3) {
        2
    } else {
        3
    }
}

/// Algorithm I3DS: `M_1` up to `Sum/3`, then `M_2` up to `10/27 Sum`,
/// everything else on `M_3`.
pub fn step_i3ds(state: &PolicyState, p: Rational) -> usize {
    if state.load(1) + p <= frac(1, 3) * state.sum {
        1
    } else if state.load(2) + p <= frac(10, 27) * state.sum {
        2
    } else {
        3
    }
}

/// Least loaded machine, lowest index on ties.
pub fn step_ls(state: &PolicyState, _p: Rational) -> usize {
    let loads = state.loads.as_slice();
    let mut best = 0;
    for (j, l) in loads.iter().enumerate().skip(1) {
        if *l < loads[best] {
            best = j;
        }
    }
    best + 1
}

/// Algorithm SD for two machines. `job_index` is 1-based.
///
/// `J_1` goes to `M_1`. With `s = l_1 + p_2`:
/// * `4/9 Sum <= s <= 5/9 Sum`: `J_2` joins `M_1`, all later jobs go to `M_2`;
/// * `7/18 Sum <= s < 4/9 Sum` or `s > 5/9 Sum`: `J_2` goes to `M_2` and the
///   third job decides the routing by the two stopping criteria;
/// * `s < 7/18 Sum` has no rule and is reported as [`Error::UnspecifiedBranch`].
///
/// Whenever both machines are equally loaded the job goes to `M_2`.
pub fn step_sd(state: &PolicyState, p: Rational, job_index: usize) -> Result<SdDecision> {
    let sum = state.sum;
    let cap = frac(5, 9) * sum;
    if let SdMode::Designated { machine, .. } = state.sd_mode {
        return Ok(SdDecision {
            machine,
            designate: None,
        });
    }
    let (l1, l2) = (state.load(1), state.load(2));
    match job_index {
        1 => Ok(SdDecision {
            machine: 1,
            designate: None,
        }),
        2 => {
            let s = l1 + p;
            if s >= frac(4, 9) * sum && s <= cap {
                Ok(SdDecision {
                    machine: 1,
                    designate: Some((SdRule::SecondJobFits, 2)),
                })
            } else if s >= frac(7, 18) * sum || s > cap {
                Ok(SdDecision {
                    machine: 2,
                    designate: None,
                })
            } else {
                Err(Error::UnspecifiedBranch {
                    job: 2,
                    detail: format!("l1 + p2 = {s} is below 7/18 of Sum = {sum}"),
                })
            }
        }
        _ => {
            let fits1 = l1 + p <= cap;
            let fits2 = l2 + p <= cap;
            let (machine, rule) = match (fits1, fits2) {
                // Both fit: the heavier machine, which leaves the least for the other one.
                (true, true) => (if l1 > l2 { 1 } else { 2 }, SdRule::Criterion1),
                (true, false) => (1, SdRule::Criterion1),
                (false, true) => (2, SdRule::Criterion1),
                (false, false) => (if l1 < l2 { 1 } else { 2 }, SdRule::Criterion2),
            };
            Ok(SdDecision {
                machine,
                designate: Some((rule, 3 - machine)),
            })
        }
    }
}

/// Stateful driver feeding jobs to one policy.
#[derive(Debug, Clone)]
pub struct OnlineScheduler {
    policy: PolicyKind,
    state: PolicyState,
}

impl OnlineScheduler {
    /// `declared_sum` is the total announced before the first job; it need not
    /// equal the sizes fed so far (prefix runs rely on this).
    pub fn new(policy: PolicyKind, machines: usize, declared_sum: Rational) -> Result<Self> {
        policy.check_machines(machines)?;
        Ok(OnlineScheduler {
            policy,
            state: PolicyState::new(machines, declared_sum),
        })
    }

    pub fn policy(&self) -> PolicyKind {
        self.policy
    }

    pub fn state(&self) -> &PolicyState {
        &self.state
    }

    /// Places the next job and returns its machine (1-based).
    pub fn assign(&mut self, p: Rational) -> Result<usize> {
        let machine = match self.policy {
            PolicyKind::TwoDs => step_2ds(&self.state, p),
            PolicyKind::I2ds => step_i2ds(&self.state, p),
            PolicyKind::ThreeDs => step_3ds(&self.state, p),
            PolicyKind::I3ds => step_i3ds(&self.state, p),
            // Jobs arrive sorted, so LPT's greedy pass is list scheduling.
            PolicyKind::Ls | PolicyKind::Lpt => step_ls(&self.state, p),
            PolicyKind::Sd => {
                let decision = step_sd(&self.state, p, self.state.jobs_seen + 1)?;
                if let Some((rule, machine)) = decision.designate {
                    self.state.sd_mode = SdMode::Designated { rule, machine };
                }
                decision.machine
            }
        };
        self.state.commit(machine, p);
        Ok(machine)
    }
}

/// Runs `policy` job by job over the instance, with `Sum` taken from it.
pub fn run_online(instance: &Instance, policy: PolicyKind) -> Result<ScheduleOutcome> {
    if policy == PolicyKind::Lpt {
        policy.check_machines(instance.machines())?;
        return Ok(lpt_offline(instance));
    }
    let mut scheduler = OnlineScheduler::new(policy, instance.machines(), instance.sum())?;
    let mut assignment = Vec::with_capacity(instance.len());
    let mut trace = Vec::with_capacity(instance.len());
    for (i, &p) in instance.sizes().iter().enumerate() {
        let machine = scheduler.assign(p)?;
        assignment.push(machine);
        trace.push(TraceStep {
            job: i + 1,
            size: p,
            machine,
            loads_after: scheduler.state().loads().clone(),
        });
    }
    let loads = scheduler.state().loads().clone();
    Ok(ScheduleOutcome {
        assignment,
        makespan: loads.max(),
        loads,
        trace,
        provenance: instance.provenance(),
    })
}

/// Sorts by non-increasing size (stable), then list-schedules. The trace
/// follows the processing order; the assignment is indexed by original job.
pub fn lpt_offline(instance: &Instance) -> ScheduleOutcome {
    let sizes = instance.sizes();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]));
    let mut state = PolicyState::new(instance.machines(), instance.sum());
    let mut assignment = vec![0; sizes.len()];
    let mut trace = Vec::with_capacity(sizes.len());
    for &i in &order {
        let machine = step_ls(&state, sizes[i]);
        state.commit(machine, sizes[i]);
        assignment[i] = machine;
        trace.push(TraceStep {
            job: i + 1,
            size: sizes[i],
            machine,
            loads_after: state.loads.clone(),
        });
    }
    let loads = state.loads.clone();
    ScheduleOutcome {
        assignment,
        makespan: loads.max(),
        loads,
        trace,
        provenance: instance.provenance(),
    }
}
