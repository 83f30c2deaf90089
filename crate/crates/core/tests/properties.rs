use proptest::prelude::*;

use semisched::adversary::{
    audit_upper_bound, enumerate_decreasing_instances, minimax_value, partitions, AdversaryTree, EnumerationDomain,
    PatternFilter,
};
use semisched::oracle::opt_exact_exhaustive;
use semisched::{
    classify_pattern, competitive_ratio, lpt_offline, opt_exact, opt_lower_bound, run_online, Error, Instance,
    OnlineScheduler, PatternClass, PolicyKind, RatioKind, Rational,
};

fn q(n: i128) -> Rational {
    Rational::from_integer(n)
}

fn decreasing(max_len: usize, max_size: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1..=max_size, 1..=max_len).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    })
}

fn policy_with_machines() -> impl Strategy<Value = (PolicyKind, usize)> {
    prop_oneof![
        Just((PolicyKind::TwoDs, 2)),
        Just((PolicyKind::I2ds, 2)),
        Just((PolicyKind::Sd, 2)),
        Just((PolicyKind::ThreeDs, 3)),
        Just((PolicyKind::I3ds, 3)),
        (2usize..=4).prop_map(|m| (PolicyKind::Ls, m)),
        (2usize..=4).prop_map(|m| (PolicyKind::Lpt, m)),
    ]
}

fn run(instance: &Instance, policy: PolicyKind) -> Option<semisched::ScheduleOutcome> {
    match run_online(instance, policy) {
        Ok(o) => Some(o),
        Err(Error::UnspecifiedBranch { .. }) => None,
        Err(e) => panic!("unexpected error {e:?}"),
    }
}

/// Every non-increasing sequence of at most four positive integers summing to 8.
fn sequences_of_eight() -> Vec<Vec<Rational>> {
    (1..=4)
        .flat_map(|n| partitions(8, n, 1, 8))
        .map(|v| v.into_iter().map(Rational::from).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn loads_conserve_sum((policy, m) in policy_with_machines(), sizes in decreasing(9, 20)) {
        let inst = Instance::from_integers(m, &sizes).unwrap();
        if let Some(out) = run(&inst, policy) {
            prop_assert_eq!(out.loads.total(), inst.sum());
            prop_assert_eq!(out.makespan, out.loads.max());
            prop_assert_eq!(out.assignment.len(), inst.len());
            prop_assert!(out.assignment.iter().all(|&j| (1..=m).contains(&j)));
            for (j, load) in out.loads.as_slice().iter().enumerate() {
                let on_j: Rational = inst
                    .sizes()
                    .iter()
                    .zip(&out.assignment)
                    .filter(|(_, &a)| a == j + 1)
                    .map(|(p, _)| *p)
                    .sum();
                prop_assert_eq!(*load, on_j);
            }
        }
    }

    #[test]
    fn threshold_tests_hold_at_decision_time(sizes in decreasing(9, 20)) {
        let two = Instance::from_integers(2, &sizes).unwrap();
        let sum = two.sum();
        for (policy, fraction) in [(PolicyKind::TwoDs, Rational::new(1, 2)), (PolicyKind::I2ds, Rational::new(7, 12))] {
            let out = run_online(&two, policy).unwrap();
            let mut loads = [Rational::ZERO; 2];
            for (p, &j) in two.sizes().iter().zip(&out.assignment) {
                prop_assert_eq!(j == 1, loads[0] + *p <= fraction * sum);
                loads[j - 1] += *p;
            }
        }
        let three = Instance::from_integers(3, &sizes).unwrap();
        let out = run_online(&three, PolicyKind::ThreeDs).unwrap();
        let mut loads = [Rational::ZERO; 3];
        for (p, &j) in three.sizes().iter().zip(&out.assignment) {
            let fits = loads[0] + *p <= sum / q(3);
            prop_assert_eq!(j == 1, fits);
            if !fits {
                let expected = if loads[1] <= loads[2] { 2 } else { 3 };
                prop_assert_eq!(j, expected);
            }
            loads[j - 1] += *p;
        }
        let out = run_online(&three, PolicyKind::I3ds).unwrap();
        let mut loads = [Rational::ZERO; 3];
        for (p, &j) in three.sizes().iter().zip(&out.assignment) {
            let expected = if loads[0] + *p <= sum / q(3) {
                1
            } else if loads[1] + *p <= Rational::new(10, 27) * sum {
                2
            } else {
                3
            };
            prop_assert_eq!(j, expected);
            loads[j - 1] += *p;
        }
    }

    #[test]
    fn prefix_runs_agree((policy, m) in policy_with_machines(), sizes in decreasing(9, 20)) {
        prop_assume!(policy != PolicyKind::Lpt);
        let inst = Instance::from_integers(m, &sizes).unwrap();
        let Some(full) = run(&inst, policy) else { return Ok(()) };
        let mut scheduler = OnlineScheduler::new(policy, m, inst.sum()).unwrap();
        for (k, p) in inst.sizes().iter().enumerate() {
            prop_assert_eq!(scheduler.assign(*p).unwrap(), full.assignment[k]);
        }
    }

    #[test]
    fn scaling_preserves_schedule(
        (policy, m) in policy_with_machines(),
        sizes in decreasing(7, 15),
        num in 1i128..=9,
        den in 1i128..=9,
    ) {
        let inst = Instance::from_integers(m, &sizes).unwrap();
        let factor = Rational::new(num, den);
        let big = inst.scaled(factor).unwrap();
        match (run_online(&inst, policy), run_online(&big, policy)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(&a.assignment, &b.assignment);
                prop_assert_eq!(a.makespan * factor, b.makespan);
                let (ra, rb) = (opt_exact(&inst).unwrap(), opt_exact(&big).unwrap());
                for kind in RatioKind::BOTH {
                    prop_assert_eq!(
                        competitive_ratio(&a, &ra, kind).unwrap(),
                        competitive_ratio(&b, &rb, kind).unwrap()
                    );
                }
            }
            (Err(Error::UnspecifiedBranch { .. }), Err(Error::UnspecifiedBranch { .. })) => {}
            (a, b) => prop_assert!(false, "scaling changed the outcome kind: {:?} vs {:?}", a.err(), b.err()),
        }
    }

    #[test]
    fn runs_are_deterministic((policy, m) in policy_with_machines(), sizes in decreasing(9, 20)) {
        let a = Instance::from_integers(m, &sizes).unwrap();
        let b = Instance::from_integers(m, &sizes).unwrap();
        match (run_online(&a, policy), run_online(&b, policy)) {
            (Ok(x), Ok(y)) => {
                prop_assert_eq!(x.assignment, y.assignment);
                prop_assert_eq!(x.loads, y.loads);
                prop_assert_eq!(x.trace, y.trace);
            }
            (Err(x), Err(y)) => prop_assert_eq!(x, y),
            _ => prop_assert!(false, "nondeterministic outcome"),
        }
    }

    #[test]
    fn lpt_two_machines_within_seven_sixths(sizes in decreasing(8, 10)) {
        prop_assume!(sizes.iter().sum::<i64>() <= 30);
        let inst = Instance::from_integers(2, &sizes).unwrap();
        let lpt = lpt_offline(&inst);
        let exact = opt_exact(&inst).unwrap().exact;
        prop_assert!(lpt.makespan <= Rational::new(7, 6) * exact);
    }

    #[test]
    fn oracle_sandwich(m in 2usize..=4, sizes in decreasing(7, 12)) {
        let inst = Instance::from_integers(m, &sizes).unwrap();
        let r = opt_exact(&inst).unwrap();
        prop_assert_eq!(r.lb_formula, opt_lower_bound(&inst));
        prop_assert!(r.lb_formula <= r.exact);
        prop_assert!(r.exact <= lpt_offline(&inst).makespan);
        prop_assert_eq!(r.exact, opt_exact_exhaustive(&inst).exact);
        prop_assert_eq!(semisched::oracle::witness_makespan(&inst, &r).unwrap(), r.exact);
    }

    #[test]
    fn exact_ratio_at_least_one((policy, m) in policy_with_machines(), sizes in decreasing(8, 15)) {
        let inst = Instance::from_integers(m, &sizes).unwrap();
        if let Some(out) = run(&inst, policy) {
            let r = opt_exact(&inst).unwrap();
            let vs_exact = competitive_ratio(&out, &r, RatioKind::VsExact).unwrap();
            let vs_lb = competitive_ratio(&out, &r, RatioKind::VsLbFormula).unwrap();
            prop_assert!(vs_exact >= Rational::ONE);
            prop_assert!(vs_lb >= vs_exact);
        }
    }

    #[test]
    fn pattern_labels_match_shape(sizes in decreasing(8, 6)) {
        let rs: Vec<Rational> = sizes.iter().map(|&p| Rational::from(p)).collect();
        let expected = if rs.windows(2).all(|w| w[0] == w[1]) {
            PatternClass::I1
        } else if rs.windows(2).all(|w| w[0] > w[1]) {
            PatternClass::I2
        } else {
            PatternClass::MixedDecr
        };
        // A single job is both constant and strictly decreasing; it counts as I1.
        prop_assert_eq!(classify_pattern(&rs).unwrap(), expected);
    }

    #[test]
    fn more_sequences_never_lower_the_game(
        base in prop::collection::vec(prop::sample::select(sequences_of_eight()), 1..=3),
        extra in prop::sample::select(sequences_of_eight()),
    ) {
        let small = AdversaryTree::from_sequences("small", 2, &base).unwrap();
        let mut seqs = base.clone();
        seqs.push(extra);
        let large = AdversaryTree::from_sequences("large", 2, &seqs).unwrap();
        for kind in RatioKind::BOTH {
            prop_assert!(minimax_value(&large, kind).unwrap() >= minimax_value(&small, kind).unwrap());
        }
    }
}

#[test]
fn generator_outputs_classify_as_requested() {
    for (filter, class) in [
        (PatternFilter::I1, PatternClass::I1),
        (PatternFilter::I2, PatternClass::I2),
    ] {
        let domain = EnumerationDomain::new(3, 2, 6, 24, filter);
        for inst in enumerate_decreasing_instances(&domain).unwrap() {
            assert_eq!(inst.pattern(), class, "{:?}", inst.sizes());
        }
    }
    assert_eq!(
        classify_pattern(&semisched::adversary::gen_i1(5, Rational::new(3, 7))).unwrap(),
        PatternClass::I1
    );
}

/// Partitions of `s` into exactly `n` positive parts.
fn partition_count(s: i64, n: i64) -> u64 {
    if s == 0 && n == 0 {
        return 1;
    }
    if s <= 0 || n <= 0 || n > s {
        return 0;
    }
    partition_count(s - 1, n - 1) + partition_count(s - n, n)
}

#[test]
fn enumerator_matches_partition_recurrence() {
    for n in 1..=4usize {
        for s in 1..=12u64 {
            let domain = EnumerationDomain::new(2, n, n, s, PatternFilter::Decr).with_sum_min(s);
            let count = enumerate_decreasing_instances(&domain).unwrap().count() as u64;
            assert_eq!(count, partition_count(s as i64, n as i64), "n={n} s={s}");
        }
    }
}

#[test]
fn audits_are_reproducible() {
    let domain = EnumerationDomain::new(3, 3, 6, 20, PatternFilter::Decr);
    let a = audit_upper_bound(PolicyKind::I3ds, &domain, RatioKind::VsExact, Rational::new(15, 11)).unwrap();
    let b = audit_upper_bound(PolicyKind::I3ds, &domain, RatioKind::VsExact, Rational::new(15, 11)).unwrap();
    assert_eq!(a, b);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn three_ds_second_machine_load_hypothesis_fails() {
    // Counts from an independent enumeration; J1 of [5,3,2,1] alone puts 5 > 22/5 on M2.
    let domain = EnumerationDomain::new(3, 4, 6, 45, PatternFilter::I2);
    let report =
        semisched::adversary::audit_load_hypothesis(PolicyKind::ThreeDs, &domain, 2, Rational::new(2, 5)).unwrap();
    assert_eq!(report.instances_checked, 13173);
    assert_eq!(report.violations, 7574);
    assert_eq!(report.first_violation, Some(vec![q(5), q(3), q(2), q(1)]));
}
