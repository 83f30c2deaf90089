//! Instances, loads and schedules.
//!
//! Jobs and machines are numbered from 1 in every public value (assignments,
//! trace records, error messages), matching the usual `J_i` / `M_j` notation.
//! Load vectors are plain slices indexed from 0.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Shape of a non-increasing size sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PatternClass {
    /// All sizes equal.
    I1,
    /// Strictly decreasing.
    I2,
    /// Non-increasing with at least one tie and at least one strict step.
    MixedDecr,
}

impl PatternClass {
    pub fn label(self) -> &'static str {
        match self {
            PatternClass::I1 => "I1",
            PatternClass::I2 => "I2",
            PatternClass::MixedDecr => "MixedDecr",
        }
    }
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Validates a size sequence and reports its pattern.
///
/// A single job counts as both all-equal and strictly decreasing; it is
/// reported as `I1`.
pub fn classify_pattern(sizes: &[Rational]) -> Result<PatternClass> {
    if sizes.is_empty() {
        return Err(Error::EmptyInstance);
    }
    for (i, p) in sizes.iter().enumerate() {
        if !p.is_positive() {
            return Err(Error::NonPositiveSize { index: i + 1, size: *p });
        }
    }
    let mut all_equal = true;
    let mut strict = true;
    for (i, w) in sizes.windows(2).enumerate() {
        if w[1] > w[0] {
            return Err(Error::NotNonIncreasing {
                index: i + 2,
                prev: w[0],
                next: w[1],
            });
        }
        if w[1] == w[0] {
            strict = false;
        } else {
            all_equal = false;
        }
    }
    Ok(if all_equal {
        PatternClass::I1
    } else if strict {
        PatternClass::I2
    } else {
        PatternClass::MixedDecr
    })
}

/// An immutable scheduling instance: `m` identical machines and a
/// non-increasing sequence of positive job sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    machines: usize,
    sizes: Vec<Rational>,
    sum: Rational,
    pmax: Rational,
    pattern: PatternClass,
    #[serde(skip)]
    provenance: u64,
}

pub fn build_instance(machines: usize, sizes: Vec<Rational>) -> Result<Instance> {
    if machines < 2 {
        return Err(Error::MachineCountTooSmall(machines));
    }
    let pattern = classify_pattern(&sizes)?;
    let sum = sizes.iter().sum();
    let pmax = sizes[0];
    let mut hasher = DefaultHasher::new();
    machines.hash(&mut hasher);
    sizes.hash(&mut hasher);
    Ok(Instance {
        machines,
        sizes,
        sum,
        pmax,
        pattern,
        provenance: hasher.finish(),
    })
}

impl Instance {
    pub fn new(machines: usize, sizes: Vec<Rational>) -> Result<Self> {
        build_instance(machines, sizes)
    }

    /// Convenience constructor for integer sizes.
    pub fn from_integers(machines: usize, sizes: &[i64]) -> Result<Self> {
        build_instance(machines, sizes.iter().map(|&p| Rational::from(p)).collect())
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn sizes(&self) -> &[Rational] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    /// Always false: instances hold at least one job.
    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn sum(&self) -> Rational {
        self.sum
    }

    pub fn pmax(&self) -> Rational {
        self.pmax
    }

    pub fn pattern(&self) -> PatternClass {
        self.pattern
    }

    /// Tag identifying the (machines, sizes) pair, carried by derived values
    /// so that mixing results of different instances can be detected.
    pub fn provenance(&self) -> u64 {
        self.provenance
    }

    /// Same sizes multiplied by a positive factor.
    pub fn scaled(&self, factor: Rational) -> Result<Instance> {
        build_instance(self.machines, self.sizes.iter().map(|p| *p * factor).collect())
    }
}

/// Per-machine loads `l_1..l_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Loads(Vec<Rational>);

impl Loads {
    pub fn zeros(machines: usize) -> Self {
        Loads(vec![Rational::ZERO; machines])
    }

    pub fn from_vec(loads: Vec<Rational>) -> Self {
        Loads(loads)
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    /// Load of machine `machine` (1-based).
    pub fn of(&self, machine: usize) -> Rational {
        self.0[machine - 1]
    }

    pub fn add(&mut self, machine: usize, size: Rational) {
        self.0[machine - 1] += size;
    }

    pub fn machines(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn max(&self) -> Rational {
        self.0.iter().copied().max().unwrap_or(Rational::ZERO)
    }
}

/// One placement decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub job: usize,
    pub size: Rational,
    pub machine: usize,
    pub loads_after: Loads,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScheduleOutcome {
    pub assignment: Vec<usize>,
    pub loads: Loads,
    pub makespan: Rational,
    pub trace: Vec<TraceStep>,
    #[serde(skip)]
    pub(crate) provenance: u64,
}

impl ScheduleOutcome {
    pub fn provenance(&self) -> u64 {
        self.provenance
    }
}

/// Replays a complete assignment (1-based machine numbers) on an instance.
pub fn apply_assignment(instance: &Instance, assignment: &[usize]) -> Result<ScheduleOutcome> {
    if assignment.len() != instance.len() {
        return Err(Error::LengthMismatch {
            expected: instance.len(),
            found: assignment.len(),
        });
    }
    let m = instance.machines();
    let mut loads = Loads::zeros(m);
    let mut trace = Vec::with_capacity(instance.len());
    for (i, (&machine, &size)) in assignment.iter().zip(instance.sizes()).enumerate() {
        if machine == 0 || machine > m {
            return Err(Error::MachineIndexOutOfRange {
                job: i + 1,
                machine,
                machines: m,
            });
        }
        loads.add(machine, size);
        trace.push(TraceStep {
            job: i + 1,
            size,
            machine,
            loads_after: loads.clone(),
        });
    }
    Ok(ScheduleOutcome {
        assignment: assignment.to_vec(),
        makespan: loads.max(),
        loads,
        trace,
        provenance: instance.provenance(),
    })
}
