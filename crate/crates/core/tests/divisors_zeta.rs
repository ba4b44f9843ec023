use std::collections::BTreeSet;

use bcff_core::beta::Beta;
use bcff_core::divisors::{
    artin_kernel_degree_check, ConstDegree, Divisor, ExtensionSpec, GaloisClass, Prime,
};
use bcff_core::ffpoly::{prime_table, Field, FqPoly};
use bcff_core::mass::rat;
use bcff_core::zeta::{euler_dirichlet_check, zeta_closed_form, zeta_partial, zeta_partial_eval};
use num_rational::BigRational;
use proptest::prelude::*;

fn f(q: u32) -> Field {
    Field::prime(q).unwrap()
}

fn primes_upto(field: &Field, dmax: u32) -> Vec<Prime> {
    (1..=dmax)
        .flat_map(|d| prime_table(field, d, None).unwrap().iter().collect::<Vec<_>>())
        .map(|p| Prime::finite(p).unwrap())
        .collect()
}

#[test]
fn artin_symbol_of_linear_conductor() {
    // over F_3 with m = T the class of p is (deg p mod n, p(0))
    let field = f(3);
    let ext = ExtensionSpec::parse(&field, 2, "T").unwrap();
    for p in primes_upto(&field, 4) {
        let pf = p.poly().unwrap().clone();
        if pf.coeff(0) == 0 {
            continue;
        }
        let expect = GaloisClass {
            a: p.degree() as u64 % 2,
            u: FqPoly::constant(&field, pf.coeff(0)),
        };
        assert_eq!(ext.artin_symbol(&p).unwrap(), expect, "{p}");
    }
    assert!(ext.is_ramified(&Prime::parse(&field, "T").unwrap()));
}

#[test]
fn constant_extension_split_primes() {
    let field = f(2);
    let ext = ExtensionSpec::parse(&field, 3, "1").unwrap();
    for p in primes_upto(&field, 6) {
        let pf = p.poly().unwrap();
        assert_eq!(ext.is_split(pf), p.degree() % 3 == 0);
    }
}

#[test]
fn kernel_degrees_are_multiples_of_n() {
    let field = f(2);
    for (n, m) in [(1, "1"), (2, "1"), (3, "T"), (2, "T^2+T+1")] {
        let ext = ExtensionSpec::parse(&field, n, m).unwrap();
        let kc = artin_kernel_degree_check(&ext, 6).unwrap();
        assert!(kc.holds && kc.checked > 0, "n={n} m={m}");
    }
}

#[test]
fn infinite_constant_degree_has_no_finite_galois_group() {
    let ext = ExtensionSpec::new(&f(2), ConstDegree::Infinite, FqPoly::one(&f(2))).unwrap();
    assert!(ext.degree().is_err());
}

/// Monic polynomials of degree `d` prime to every excluded prime.
fn coprime_monics(field: &Field, excluded: &[FqPoly], d: usize) -> usize {
    FqPoly::monics(field, d)
        .filter(|g| excluded.iter().all(|p| !p.divides(g)))
        .count()
}

#[test]
fn zeta_coefficients_count_coprime_monics() {
    for (q, ex) in [(2, vec!["T"]), (2, vec!["T", "T^2+T+1"]), (3, vec!["T+1"])] {
        let field = f(q);
        let polys: Vec<FqPoly> = ex.iter().map(|s| FqPoly::parse(&field, s).unwrap()).collect();
        let excluded: BTreeSet<Prime> =
            polys.iter().map(|p| Prime::finite(p.clone()).unwrap()).collect();
        let z = zeta_partial(&field, &excluded, 7, None).unwrap();
        for d in 0..=7 {
            let n = coprime_monics(&field, &polys, d);
            assert_eq!(z.coeff(d), rat(n as i64, 1), "q={q} d={d}");
        }
    }
}

#[test]
fn euler_factor_identity() {
    let field = f(3);
    let p = Prime::parse(&field, "T^2+1").unwrap();
    let none = BTreeSet::new();
    let one: BTreeSet<Prime> = [p].into();
    let full = zeta_partial(&field, &none, 9, None).unwrap();
    let less = zeta_partial(&field, &one, 9, None).unwrap();
    let factor = bcff_core::mass::FormalMass::from_ints(&[1, 0, -1]);
    assert_eq!((&full * &factor).truncate(10).coeffs(), less.truncate(10).coeffs());
}

#[test]
fn euler_dirichlet_small() {
    for q in [2, 3, 5] {
        assert!(euler_dirichlet_check(&f(q), 7).unwrap());
    }
}

#[test]
fn partial_sum_within_tail_of_closed_form() {
    for (q, b) in [(2, Beta::integer(2)), (3, Beta::integer(2)), (2, Beta::ratio(3, 2))] {
        let (_, ev) = zeta_partial_eval(&f(q), &BTreeSet::new(), 14, &b, None).unwrap();
        let closed = zeta_closed_form(q, &b).unwrap();
        assert!(ev.value <= closed.value + 1e-12);
        assert!(closed.value - ev.value <= ev.tail_bound * (1.0 + 1e-9), "q={q} β={b}");
    }
    assert_eq!(
        zeta_closed_form(3, &Beta::integer(3)).unwrap().exact,
        Some(BigRational::new(9.into(), 8.into()))
    );
}

fn divisor(q: u32) -> impl Strategy<Value = Divisor> {
    let field = f(q);
    let primes = primes_upto(&field, 3);
    prop::collection::vec((0..primes.len(), -3i64..=3), 0..4).prop_map(move |v| {
        let mut d = Divisor::zero(&field);
        for (i, k) in v {
            d.add_prime(primes[i].clone(), k);
        }
        d
    })
}

fn ext3() -> ExtensionSpec {
    ExtensionSpec::parse(&f(3), 2, "T^2+1").unwrap()
}

proptest! {
    #[test]
    fn divisor_round_trip(d in divisor(3)) {
        prop_assert_eq!(Divisor::parse(d.field(), &d.to_string()).unwrap(), d);
    }

    #[test]
    fn degree_is_additive(a in divisor(2), b in divisor(2)) {
        prop_assert_eq!(a.plus(&b).degree(), a.degree() + b.degree());
        prop_assert!(a.minus(&a).is_zero());
    }

    #[test]
    fn artin_map_is_a_homomorphism(a in divisor(3), b in divisor(3)) {
        let e = ext3();
        let p = Prime::parse(e.field(), "T^2+1").unwrap();
        prop_assume!(a.mult(&p) == 0 && b.mult(&p) == 0);
        let lhs = e.artin_of_divisor(&a.plus(&b)).unwrap();
        let rhs = e.compose(&e.artin_of_divisor(&a).unwrap(), &e.artin_of_divisor(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn polynomial_divisors_multiply(a in 0u64..81, b in 0u64..27) {
        let field = f(3);
        let pa = FqPoly::from_lex_code(&field, 4, a);
        let pb = FqPoly::from_lex_code(&field, 3, b);
        let lhs = Divisor::of_poly(&(&pa * &pb)).unwrap();
        let rhs = Divisor::of_poly(&pa).unwrap().plus(&Divisor::of_poly(&pb).unwrap());
        prop_assert_eq!(lhs.degree(), 7);
        prop_assert_eq!(lhs, rhs);
    }
}
