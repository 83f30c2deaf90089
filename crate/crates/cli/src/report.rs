//! Report schemas. Every number is an exact fraction string; the `decimal`
//! fields are rounded approximations for people and carry no extra data.

use semisched::adversary::{AuditReport, GameMove, TreeSummary};
use semisched::{Loads, PatternClass, PolicyKind, RatioKind, Rational, TraceStep};
use serde::{Deserialize, Serialize};

pub const REPORT_VERSION: u32 = 1;

const DECIMAL_PLACES: usize = 6;

pub fn decimal(r: Rational) -> String {
    r.to_decimal_string(DECIMAL_PLACES)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceEcho {
    pub machines: usize,
    pub sizes: Vec<Rational>,
    pub sum: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioEntry {
    pub denominator: RatioKind,
    pub value: Rational,
    pub decimal: String,
}

impl RatioEntry {
    pub fn new(denominator: RatioKind, value: Rational) -> Self {
        RatioEntry {
            denominator,
            value,
            decimal: decimal(value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub report_version: u32,
    pub policy: PolicyKind,
    pub instance: InstanceEcho,
    pub pattern: PatternClass,
    pub assignment: Vec<usize>,
    pub loads: Loads,
    pub makespan: Rational,
    pub opt_lb_formula: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opt_exact: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opt_exact_assignment: Option<Vec<usize>>,
    pub ratios: Vec<RatioEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStep>>,
}

impl RunReport {
    pub fn ratio(&self, kind: RatioKind) -> Option<Rational> {
        self.ratios.iter().find(|r| r.denominator == kind).map(|r| r.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBoundReport {
    pub report_version: u32,
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<Rational>,
    pub machines: usize,
    pub declared_sum: Rational,
    pub ratio_kind: RatioKind,
    pub tree: TreeSummary,
    pub value: Rational,
    pub value_decimal: String,
    pub principal_line: Vec<GameMove>,
    pub final_sizes: Vec<Rational>,
    pub final_assignment: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditEnvelope {
    pub report_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_ratio_decimal: Option<String>,
    #[serde(flatten)]
    pub report: AuditReport,
}

impl AuditEnvelope {
    pub fn new(report: AuditReport) -> Self {
        AuditEnvelope {
            report_version: REPORT_VERSION,
            worst_ratio_decimal: report.worst_ratio.map(decimal),
            report,
        }
    }
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("reports always serialize");
    out.push('\n');
    out
}
