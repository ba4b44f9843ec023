use bcff_core::bcmap::{bc_check, quotient_square_check};
use bcff_core::carlitz::{
    carlitz_exp_truncated, carlitz_phi, frobenius_action_check, ideal_action_principal,
    phi_mod_p_check, torsion_points, TwistedPoly, TORSION_SEARCH_BOUND,
};
use bcff_core::divisors::Prime;
use bcff_core::ffpoly::{prime_table, Field, FqPoly};
use proptest::prelude::*;

fn f(q: u32) -> Field {
    Field::prime(q).unwrap()
}

fn poly(q: u32, s: &str) -> FqPoly {
    FqPoly::parse(&f(q), s).unwrap()
}

#[test]
fn phi_t_squared_by_hand() {
    // (T + τ)(T + τ) = T² + (T + T^q)τ + τ²
    assert_eq!(carlitz_phi(&poly(2, "T^2")).unwrap().phi.to_string(), "T^2 + (T^2+T)*t + t^2");
    assert_eq!(carlitz_phi(&poly(3, "T^2")).unwrap().phi.to_string(), "T^2 + (T^3+T)*t + t^2");
    let parsed = TwistedPoly::parse(&f(3), "T^2 + (T^3+T)*t + t^2").unwrap();
    assert_eq!(carlitz_phi(&poly(3, "T^2")).unwrap().phi, parsed);
}

#[test]
fn reduction_mod_primes() {
    for q in [2, 3] {
        for d in 1..=4 {
            for p in prime_table(&f(q), d, None).unwrap().iter() {
                assert!(phi_mod_p_check(&Prime::finite(p).unwrap()).unwrap());
            }
        }
    }
}

/// Roots of the reduced `φ_m` counted by running through the whole field.
fn brute_root_count(m: &FqPoly, p: &FqPoly) -> usize {
    let t = torsion_points(m, &Prime::finite(p.clone()).unwrap(), TORSION_SEARCH_BOUND).unwrap();
    let phi = t.reduce_phi(&carlitz_phi(m).unwrap().phi);
    let ext = &t.field;
    let q = m.field().q();
    let size = (q as u64).pow(ext.degree() as u32);
    (0..size)
        .filter(|&i| {
            let mut c = Vec::new();
            let mut k = i;
            for _ in 0..ext.degree() {
                c.push((k % q as u64) as u32);
                k /= q as u64;
            }
            phi.apply(&ext.from_coords(&c)).is_zero()
        })
        .count()
}

#[test]
fn torsion_counts_and_frobenius() {
    for (q, m, p) in [(2, "T", "T+1"), (2, "T^2+T+1", "T"), (3, "T^2", "T+1"), (3, "T+1", "T^2+1")] {
        let (m, p) = (poly(q, m), poly(q, p));
        let t = torsion_points(&m, &Prime::finite(p.clone()).unwrap(), TORSION_SEARCH_BOUND).unwrap();
        let expect = (q as usize).pow(m.deg() as u32);
        assert_eq!(t.len(), expect);
        assert!(t.module_iso_check().unwrap());
        assert!(frobenius_action_check(&t).unwrap());
        if t.field.degree() <= 6 {
            assert_eq!(brute_root_count(&m, &p), expect, "m={m} p={p}");
        }
    }
    assert!(torsion_points(&poly(2, "T^2"), &Prime::finite(poly(2, "T")).unwrap(), 16).is_err());
}

#[test]
fn exponential_functional_equation() {
    for (q, n) in [(2, 3), (3, 2), (5, 2)] {
        let e = carlitz_exp_truncated(&f(q), n).unwrap();
        assert!(e.functional_equation);
        assert_eq!(e.terms().len(), n as usize + 1);
    }
    // D_1 = T^q − T
    let e = carlitz_exp_truncated(&f(3), 1).unwrap();
    assert_eq!(e.d[1], poly(3, "T^3-T"));
}

#[test]
fn principal_ideal_actions_commute() {
    let a = ideal_action_principal(&poly(3, "T^2+1"), 2).unwrap();
    assert!(a.commutes && a.trivial_action);
    assert!(ideal_action_principal(&poly(3, "2*T"), 1).is_err());
}

#[test]
fn torsion_levels_small() {
    for (q, m) in [(2, "T"), (2, "T^2"), (3, "T"), (3, "T^2+1"), (3, "T^2+T+2")] {
        let r = bc_check(&poly(q, m), 2).unwrap();
        assert!(r.bijective && r.ideal_equivariant && r.galois_equivariant, "q={q} m={m}");
        assert_eq!(r.points as u64, (q as u64).pow(poly(q, m).deg() as u32));
        assert!(r.unique_functional || r.unit_discrepancy_g.is_some());
    }
}

#[test]
fn quotient_square_commutes() {
    assert!(quotient_square_check(&poly(2, "T"), &poly(2, "T^2")).unwrap().holds);
    assert!(quotient_square_check(&poly(3, "T"), &poly(3, "T^2")).unwrap().holds);
}

fn small(q: u32) -> impl Strategy<Value = FqPoly> {
    prop::collection::vec(0..q, 1..=4).prop_map(move |c| FqPoly::new(&f(q), c))
}

fn qpair() -> impl Strategy<Value = (FqPoly, FqPoly)> {
    prop_oneof![Just(2u32), Just(3)].prop_flat_map(|q| (small(q), small(q)))
}

proptest! {
    #[test]
    fn phi_is_a_ring_homomorphism((a, b) in qpair()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let pa = carlitz_phi(&a).unwrap();
        let pb = carlitz_phi(&b).unwrap();
        prop_assert!(pa.satisfies_invariants());
        let prod = carlitz_phi(&(&a * &b)).unwrap().phi;
        prop_assert_eq!(pa.phi.twisted_mul(&pb.phi).unwrap(), prod.clone());
        prop_assert_eq!(pb.phi.twisted_mul(&pa.phi).unwrap(), prod);
        let s = &a + &b;
        prop_assume!(!s.is_zero());
        prop_assert_eq!(pa.phi.checked_add(&pb.phi).unwrap(), carlitz_phi(&s).unwrap().phi);
    }

    #[test]
    fn twisted_display_round_trip((a, _b) in qpair()) {
        prop_assume!(!a.is_zero());
        let phi = carlitz_phi(&a).unwrap().phi;
        let back = TwistedPoly::parse(a.field(), &phi.to_string()).unwrap();
        prop_assert_eq!(back, phi);
    }
}
