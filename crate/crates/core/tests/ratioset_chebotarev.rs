use std::collections::BTreeSet;

use bcff_core::beta::Beta;
use bcff_core::chebotarev::{count_by_class, density_check, prediction, DEFAULT_C};
use bcff_core::divisors::{ExtensionSpec, Prime};
use bcff_core::ffpoly::{prime_table, Field, FqPoly};
use bcff_core::ratioset::{
    build_pairing, classify_space, divergence_diagnostic, flow_report, kernel_cocycle_check,
    product_invariance_check, rn_cocycle, sample_cocycle_lattice, Divergence, FiniteFactor,
    TailSpace, TailTransform, TypeKind, DEFAULT_THETA,
};
use proptest::prelude::*;

fn ext(q: u32, n: u32, m: &str) -> ExtensionSpec {
    ExtensionSpec::parse(&Field::prime(q).unwrap(), n, m).unwrap()
}

#[test]
fn class_counts_by_direct_reduction() {
    let e = ext(3, 2, "T^2+1");
    let field = e.field().clone();
    let m = e.conductor().clone();
    let t = count_by_class(&e, 5, None).unwrap();
    for d in 1..=5u32 {
        for c in e.classes().unwrap() {
            let direct = prime_table(&field, d, None)
                .unwrap()
                .iter()
                .filter(|p| d as u64 % 2 == c.a && p.rem(&m) == c.u)
                .count() as u64;
            assert_eq!(t.count(d, &c), direct, "d={d} class={c}");
        }
    }
    assert!(t.row_sums_match());
}

#[test]
fn predictions_sum_to_prime_number_theorem() {
    let e = ext(2, 2, "T^2+T+1");
    for d in 1..=6u32 {
        let total: f64 = e
            .classes()
            .unwrap()
            .iter()
            .map(|c| prediction(&e, d, c).unwrap())
            .sum();
        assert!((total - 2f64.powi(d as i32) / d as f64).abs() < 1e-9);
    }
    assert!(density_check(&count_by_class(&e, 9, None).unwrap(), DEFAULT_C).unwrap());
}

#[test]
fn diagnostic_regimes() {
    let e = ext(2, 1, "1");
    let scheme = build_pairing(&e, &BTreeSet::new(), 12, None).unwrap();
    let conv = divergence_diagnostic(&scheme, 2, &Beta::integer(2), DEFAULT_THETA);
    assert_eq!(conv.verdict, Divergence::Converges);
    let ub = conv.upper_bound.unwrap();
    assert!(ub >= conv.partial_sum && ub < 0.1);
    let half = divergence_diagnostic(&scheme, 2, &Beta::ratio(1, 2), DEFAULT_THETA);
    assert_eq!(half.verdict, Divergence::Diverges);
    assert!(half.heuristic && half.partial_sum > DEFAULT_THETA);
    // partial sums are nondecreasing
    assert!(half.rows.windows(2).all(|w| w[1].partial_sum >= w[0].partial_sum));
}

#[test]
fn kernel_cocycles_are_multiples_of_n() {
    for (n, m) in [(1, "1"), (2, "1"), (3, "T")] {
        let e = ext(2, n, m);
        let r = kernel_cocycle_check(&e, 6, 2).unwrap();
        assert!(r.holds, "n={n} m={m}");
        let space = TailSpace::new(&e, &BTreeSet::new(), 9, 4, true, None).unwrap();
        let g = sample_cocycle_lattice(&e, &space, 200, 11).unwrap();
        assert_eq!(g % n as u64, 0);
        assert_eq!(g, sample_cocycle_lattice(&e, &space, 200, 11).unwrap());
    }
}

#[test]
fn products_with_finite_factors() {
    let e = ext(2, 2, "1");
    let space = TailSpace::new(&e, &BTreeSet::new(), 12, 4, true, None).unwrap();
    let b = Beta::integer(1);
    let before = classify_space(&space, 2, &b).unwrap();
    assert!(matches!(before.kind, TypeKind::IiiLambda { exponent: 2, .. }));
    for w in [FiniteFactor::uniform(2), FiniteFactor::uniform(5)] {
        assert!(product_invariance_check(&space, &w, 2, &b).unwrap());
    }
    assert!(FiniteFactor::new(vec![]).is_err());
}

#[test]
fn flow_speed() {
    let r = flow_report(&Beta::ratio(1, 2), 3, Some(2)).unwrap();
    assert!((r.speed - 2.0 / 3f64.ln()).abs() < 1e-12);
    assert!(flow_report(&Beta::integer(-1), 3, None).is_err());
}

proptest! {
    #[test]
    fn cocycle_is_degree_weighted_shift(moves in prop::collection::vec((0usize..20, 0u32..=4, 0u32..=4), 0..5)) {
        let e = ext(2, 1, "1");
        let space = TailSpace::new(&e, &BTreeSet::new(), 5, 4, false, None).unwrap();
        let field = e.field();
        let primes: Vec<Prime> = (1..=5)
            .flat_map(|d| prime_table(field, d, None).unwrap().iter().collect::<Vec<FqPoly>>())
            .map(|p| Prime::finite(p).unwrap())
            .collect();
        let mut t = TailTransform::identity();
        let mut used = BTreeSet::new();
        let mut expect = 0i64;
        for (i, from, to) in moves {
            let p = primes[i % primes.len()].clone();
            if used.insert(p.clone()) {
                expect += (to as i64 - from as i64) * p.degree() as i64;
                t = t.with(p, from, to);
            }
        }
        prop_assert_eq!(rn_cocycle(&space, &t).unwrap(), expect);
    }
}
