//! Lower-bound families encoded as adversary trees.

use crate::error::{Error, Result};
use crate::rational::Rational;

use super::tree::AdversaryTree;

fn q(n: i128) -> Rational {
    Rational::from_integer(n)
}

/// Two machines, `Sum = k > 6`, three jobs.
///
/// The adversary opens with `(k+3)/3`. After seeing where it went, it picks
/// the second job from `{(2k-3)/6, k/3}`; the third job is whatever remains
/// of `Sum`. The game value is `4/3 - 2/k`.
pub fn theorem1_tree(k: Rational) -> Result<AdversaryTree> {
    if k <= q(6) {
        return Err(Error::KOutOfRange {
            k,
            requirement: "k must exceed 6",
        });
    }
    let p1 = (k + q(3)) / q(3);
    let rest = (q(2) * k - q(3)) / q(3);
    let equal_split = rest / q(2);
    let third = k / q(3);
    let sequences = vec![vec![p1, equal_split, rest - equal_split], vec![p1, third, rest - third]];
    AdversaryTree::from_sequences(format!("t1(k={k})"), 2, &sequences)
}

/// Two machines, strictly decreasing sizes `12k/25, 7k/25, 6k/25`, `k >= 7`.
pub fn theorem2_tree(k: Rational) -> Result<AdversaryTree> {
    if k < q(7) {
        return Err(Error::KOutOfRange {
            k,
            requirement: "k must be at least 7",
        });
    }
    let unit = k / q(25);
    let sequences = vec![vec![q(12) * unit, q(7) * unit, q(6) * unit]];
    AdversaryTree::from_sequences(format!("t2(k={k})"), 2, &sequences)
}

/// Three machines, `Sum = 27`, four jobs opening with 9.
///
/// Each continuation is `9, p2, p3, 18 - p2 - p3`. When J2 may share M1 with
/// J1 the adversary answers `6,6`; otherwise it picks `(p2, p3)` from the ten
/// pairs with `7 <= p2 <= 9`, `5 <= p3 <= p2` and `13 <= p2 + p3 <= 17`, or
/// from `8,5 / 7,6 / 6,6`. Duplicates collapse, leaving 11 sequences. The
/// adversary sees each placement before choosing the next size.
pub fn theorem6_tree() -> Result<AdversaryTree> {
    let mut pairs: Vec<(i128, i128)> = vec![(6, 6)];
    pairs.extend([
        (9, 8),
        (9, 7),
        (9, 6),
        (9, 5),
        (8, 8),
        (8, 7),
        (8, 6),
        (8, 5),
        (7, 7),
        (7, 6),
    ]);
    pairs.extend([(8, 5), (7, 6), (6, 6)]);
    pairs.sort_unstable_by(|a, b| b.cmp(a));
    pairs.dedup();
    let sequences: Vec<Vec<Rational>> = pairs
        .into_iter()
        .map(|(p2, p3)| vec![q(9), q(p2), q(p3), q(18 - p2 - p3)])
        .collect();
    AdversaryTree::from_sequences("t6", 3, &sequences)
}

/// Only the four continuations `9,8,8,2`, `9,8,7,3`, `9,8,6,4`, `9,8,5,5`.
pub fn theorem6_subcase_tree() -> Result<AdversaryTree> {
    let sequences: Vec<Vec<Rational>> = [[9, 8, 8, 2], [9, 8, 7, 3], [9, 8, 6, 4], [9, 8, 5, 5]]
        .iter()
        .map(|s| s.iter().map(|&p| q(p)).collect())
        .collect();
    AdversaryTree::from_sequences("t6-subcase", 3, &sequences)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::tree::{minimax_value, solve_minimax};
    use crate::model::PatternClass;
    use crate::oracle::{opt_lower_bound, RatioKind};

    #[test]
    fn k_ranges() {
        assert!(matches!(theorem1_tree(q(6)), Err(Error::KOutOfRange { .. })));
        assert!(theorem1_tree(Rational::new(13, 2)).is_ok());
        assert!(matches!(
            theorem2_tree(Rational::new(69, 10)),
            Err(Error::KOutOfRange { .. })
        ));
        assert!(theorem2_tree(q(7)).is_ok());
    }

    #[test]
    fn theorem2_leaves() {
        let tree = theorem2_tree(q(25)).unwrap();
        let leaves = tree.leaf_instances();
        assert_eq!(leaves.len(), 1);
        assert_eq!(leaves[0].sizes(), &[q(12), q(7), q(6)]);
        assert_eq!(leaves[0].pattern(), PatternClass::I2);
        assert_eq!(
            minimax_value(&tree, RatioKind::VsLbFormula).unwrap(),
            Rational::new(26, 25)
        );
        assert_eq!(minimax_value(&tree, RatioKind::VsExact).unwrap(), q(1));
    }

    #[test]
    fn theorem1_values_and_leaf_ratios() {
        let tree = theorem1_tree(q(12)).unwrap();
        assert!(tree.is_complete());
        assert_eq!(
            minimax_value(&tree, RatioKind::VsLbFormula).unwrap(),
            Rational::new(7, 6)
        );
        // Values from an independent enumeration of the game.
        assert_eq!(minimax_value(&tree, RatioKind::VsExact).unwrap(), q(1));
        assert_eq!(
            minimax_value(&theorem1_tree(q(30)).unwrap(), RatioKind::VsLbFormula).unwrap(),
            Rational::new(19, 15)
        );

        // Case 1 leaf: J1 and J2 together, J3 alone: (4k+3)/6 over k/2.
        let leaves = tree.leaf_instances();
        let equal = leaves.iter().find(|i| i.sizes()[1] == i.sizes()[2]).unwrap();
        let out = crate::model::apply_assignment(equal, &[1, 1, 2]).unwrap();
        assert_eq!(out.makespan / opt_lower_bound(equal), Rational::new(17, 12));
        // Case 2.2 leaf: J1 alone, J2 and J3 together: (2k-3)/3 over k/2.
        let split = leaves.iter().find(|i| i.sizes()[1] != i.sizes()[2]).unwrap();
        let out = crate::model::apply_assignment(split, &[1, 2, 2]).unwrap();
        assert_eq!(out.makespan / opt_lower_bound(split), Rational::new(7, 6));
    }

    #[test]
    fn theorem6_structure() {
        let tree = theorem6_tree().unwrap();
        assert!(tree.is_complete());
        assert_eq!(tree.declared_sum, q(27));
        let leaves = tree.leaf_instances();
        assert_eq!(leaves.len(), 11);
        let sigma4 = leaves.iter().find(|i| i.sizes() == [q(9), q(8), q(5), q(5)]).unwrap();
        assert_eq!(opt_lower_bound(sigma4), q(9));
        assert_eq!(sigma4.pattern(), PatternClass::MixedDecr);
    }

    #[test]
    fn theorem6_values() {
        let tree = theorem6_tree().unwrap();
        let lb = solve_minimax(&tree, RatioKind::VsLbFormula).unwrap();
        assert!(lb.value >= Rational::new(10, 9));
        // Regression values, matching an independent enumeration of the game.
        assert_eq!(lb.value, Rational::new(4, 3));
        assert_eq!(minimax_value(&tree, RatioKind::VsExact).unwrap(), q(1));
        let sub = theorem6_subcase_tree().unwrap();
        assert_eq!(
            minimax_value(&sub, RatioKind::VsLbFormula).unwrap(),
            Rational::new(10, 9)
        );
        assert_eq!(minimax_value(&sub, RatioKind::VsExact).unwrap(), q(1));
    }
}
