//! Instance generators and exhaustive enumeration of integer-size domains.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{build_instance, Instance, PatternClass};
use crate::rational::Rational;

/// `n` jobs of size `x`.
pub fn gen_i1(n: usize, x: Rational) -> Vec<Rational> {
    vec![x; n]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternFilter {
    /// All sizes equal.
    I1,
    /// Strictly decreasing.
    I2,
    /// Any non-increasing sequence.
    Decr,
}

impl PatternFilter {
    pub fn admits(self, pattern: PatternClass) -> bool {
        match self {
            PatternFilter::I1 => pattern == PatternClass::I1,
            PatternFilter::I2 => pattern == PatternClass::I2,
            PatternFilter::Decr => true,
        }
    }
}

impl FromStr for PatternFilter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "i1" => Ok(PatternFilter::I1),
            "i2" => Ok(PatternFilter::I2),
            "decr" => Ok(PatternFilter::Decr),
            other => Err(format!("unknown pattern {other:?} (expected i1, i2 or decr)")),
        }
    }
}

impl fmt::Display for PatternFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternFilter::I1 => "i1",
            PatternFilter::I2 => "i2",
            PatternFilter::Decr => "decr",
        })
    }
}

/// A finite set of integer-size instances.
///
/// Contains every non-increasing sequence of `n` integer sizes with
/// `n_min <= n <= n_max`, `sum_min <= Sum <= sum_max`, every size in
/// `[size_min, size_max]`, the smallest size at least
/// `last_size_fraction * Sum` when that is set, and a pattern admitted by
/// `pattern`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationDomain {
    pub machines: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub sum_min: u64,
    pub sum_max: u64,
    pub size_min: u64,
    pub size_max: Option<u64>,
    pub last_size_fraction: Option<Rational>,
    pub pattern: PatternFilter,
}

impl EnumerationDomain {
    pub fn new(machines: usize, n_min: usize, n_max: usize, sum_max: u64, pattern: PatternFilter) -> Self {
        EnumerationDomain {
            machines,
            n_min,
            n_max,
            sum_min: 1,
            sum_max,
            size_min: 1,
            size_max: None,
            last_size_fraction: None,
            pattern,
        }
    }

    pub fn with_sum_min(mut self, sum_min: u64) -> Self {
        self.sum_min = sum_min;
        self
    }

    pub fn with_size_min(mut self, size_min: u64) -> Self {
        self.size_min = size_min;
        self
    }

    pub fn with_size_max(mut self, size_max: u64) -> Self {
        self.size_max = Some(size_max);
        self
    }

    pub fn with_last_size_fraction(mut self, fraction: Rational) -> Self {
        self.last_size_fraction = Some(fraction);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidDomain(msg));
        if self.machines < 2 {
            return fail(format!("machines must be at least 2, got {}", self.machines));
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return fail(format!("need 1 <= n_min <= n_max, got {}..={}", self.n_min, self.n_max));
        }
        if self.sum_min > self.sum_max {
            return fail(format!("sum_min {} exceeds sum_max {}", self.sum_min, self.sum_max));
        }
        if self.size_min == 0 {
            return fail("size_min must be positive".into());
        }
        if let Some(cap) = self.size_max {
            if cap < self.size_min {
                return fail(format!("size_max {cap} is below size_min {}", self.size_min));
            }
        }
        if let Some(f) = self.last_size_fraction {
            if f.is_zero() || !f.is_positive() {
                return fail(format!("last_size_fraction must be positive, got {f}"));
            }
        }
        Ok(())
    }

    fn admits_last(&self, sizes: &[u64], sum: u64) -> bool {
        match (self.last_size_fraction, sizes.last()) {
            (Some(f), Some(&last)) => Rational::from(last) >= f * Rational::from(sum),
            _ => true,
        }
    }
}

/// Non-increasing sequences of exactly `parts` integers in `[lo, hi]` that
/// sum to `total`, in decreasing lexicographic order.
pub fn partitions(total: u64, parts: usize, lo: u64, hi: u64) -> Vec<Vec<u64>> {
    fn go(remaining: u64, parts: usize, lo: u64, hi: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if parts == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let k = parts as u64;
        if remaining < lo * k || remaining > hi.saturating_mul(k) {
            return;
        }
        // The first part is at least the average, otherwise the rest cannot fit under it.
        let top = hi.min(remaining - lo * (k - 1));
        let bottom = lo.max(remaining.div_ceil(k));
        for first in (bottom..=top).rev() {
            prefix.push(first);
            go(remaining - first, parts - 1, lo, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 && hi >= lo {
        go(total, parts, lo, hi, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// Every instance of the domain exactly once, ordered by `n`, then `Sum`,
/// then decreasing lexicographic size order.
pub fn enumerate_decreasing_instances(domain: &EnumerationDomain) -> Result<impl Iterator<Item = Instance> + '_> {
    domain.validate()?;
    let hi = domain.size_max.unwrap_or(domain.sum_max);
    let iter = (domain.n_min..=domain.n_max).flat_map(move |n| {
        let lowest = domain.sum_min.max(domain.size_min * n as u64);
        (lowest..=domain.sum_max).flat_map(move |sum| {
            let candidates: Vec<Vec<u64>> = match domain.pattern {
                PatternFilter::I1 => {
                    let n64 = n as u64;
                    if sum % n64 == 0 && sum / n64 >= domain.size_min && sum / n64 <= hi {
                        vec![vec![sum / n64; n]]
                    } else {
                        Vec::new()
                    }
                }
                PatternFilter::I2 | PatternFilter::Decr => partitions(sum, n, domain.size_min, hi),
            };
            candidates.into_iter().filter_map(move |sizes| {
                if !domain.admits_last(&sizes, sum) {
                    return None;
                }
                let instance = build_instance(domain.machines, sizes.into_iter().map(Rational::from).collect())
                    .expect("enumerated sizes are positive and non-increasing");
                domain.pattern.admits(instance.pattern()).then_some(instance)
            })
        })
    });
    Ok(iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn sizes_of(domain: &EnumerationDomain) -> Vec<Vec<i128>> {
        enumerate_decreasing_instances(domain)
            .unwrap()
            .map(|i| i.sizes().iter().map(|p| p.numer()).collect())
            .collect()
    }

    #[test]
    fn gen_i1_examples() {
        assert_eq!(gen_i1(3, Rational::ONE), vec![Rational::ONE; 3]);
        assert_eq!(gen_i1(4, Rational::ONE).len(), 4);
        assert_eq!(gen_i1(1, Rational::from(5)), vec![Rational::from(5)]);
    }

    #[test]
    fn three_parts_of_five() {
        let d = EnumerationDomain::new(2, 3, 3, 5, PatternFilter::Decr).with_sum_min(5);
        assert_eq!(sizes_of(&d), vec![vec![3, 1, 1], vec![2, 2, 1]]);
    }

    #[test]
    fn two_parts_of_three() {
        let d = EnumerationDomain::new(2, 2, 2, 3, PatternFilter::Decr).with_sum_min(3);
        assert_eq!(sizes_of(&d), vec![vec![2, 1]]);
    }

    #[test]
    fn equal_parts_filter() {
        let d = EnumerationDomain::new(2, 3, 3, 6, PatternFilter::I1).with_sum_min(6);
        assert_eq!(sizes_of(&d), vec![vec![2, 2, 2]]);
        let unit = EnumerationDomain::new(2, 3, 5, 100, PatternFilter::I1).with_size_max(1);
        assert_eq!(sizes_of(&unit), vec![vec![1; 3], vec![1; 4], vec![1; 5]]);
    }

    #[test]
    fn strict_filter_and_scopes() {
        let d = EnumerationDomain::new(2, 3, 3, 9, PatternFilter::I2).with_sum_min(9);
        assert_eq!(sizes_of(&d), vec![vec![6, 2, 1], vec![5, 3, 1], vec![4, 3, 2]]);
        let d = d.clone().with_size_min(2);
        assert_eq!(sizes_of(&d), vec![vec![4, 3, 2]]);
        let d = EnumerationDomain::new(2, 3, 3, 12, PatternFilter::I2)
            .with_sum_min(12)
            .with_last_size_fraction(Rational::new(1, 4));
        assert_eq!(sizes_of(&d), vec![vec![5, 4, 3]]);
    }

    #[test]
    fn no_duplicates_and_all_valid() {
        let d = EnumerationDomain::new(3, 1, 6, 18, PatternFilter::Decr);
        let all = sizes_of(&d);
        let unique: HashSet<_> = all.iter().collect();
        assert_eq!(unique.len(), all.len());
        for s in &all {
            assert!(s.windows(2).all(|w| w[0] >= w[1]));
            assert!(s.iter().sum::<i128>() <= 18);
        }
    }

    #[test]
    fn invalid_domains() {
        let bad = EnumerationDomain::new(1, 1, 2, 5, PatternFilter::Decr);
        assert!(matches!(bad.validate(), Err(Error::InvalidDomain(_))));
        let bad = EnumerationDomain::new(2, 3, 2, 5, PatternFilter::Decr);
        assert!(enumerate_decreasing_instances(&bad).is_err());
        let bad = EnumerationDomain::new(2, 1, 2, 5, PatternFilter::Decr).with_sum_min(6);
        assert!(bad.validate().is_err());
        let bad = EnumerationDomain::new(2, 1, 2, 5, PatternFilter::Decr).with_size_min(0);
        assert!(bad.validate().is_err());
    }
}
