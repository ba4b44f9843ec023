//! Finite-level comparison `π_m: X_m → Y_m` between characters of the
//! Carlitz torsion `φ[m]` and `Y_m = (A/m)* ×_{(A/m)*} A/m`.

use std::collections::HashMap;

use serde::Serialize;

use crate::carlitz::{carlitz_phi, torsion_points, TorsionSet, TORSION_SEARCH_BOUND};
use crate::divisors::Prime;
use crate::error::{Error, Result};
use crate::ffpoly::{factor, prime_table, Field, FqPoly, UnitGroup};

/// Largest `|A/m|` handled.
pub const LEVEL_LIMIT: u64 = 10_000;

/// An F_p-linear functional on `A/m`: `Σ w[i·e + k]·digit_k(c_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Functional {
    pub weights: Vec<u32>,
}

impl Functional {
    /// Coefficient of `T^(deg m − 1)`, then trace to F_p.
    pub fn top_trace(field: &Field, deg_m: usize) -> Self {
        let e = field.e() as usize;
        let mut w = vec![0; deg_m * e];
        for k in 0..e {
            let mut unit = vec![0; e];
            unit[k] = 1;
            w[(deg_m - 1) * e + k] = field.trace(field.from_digits(&unit));
        }
        Functional { weights: w }
    }

    pub fn eval(&self, field: &Field, x: &FqPoly) -> u32 {
        let e = field.e() as usize;
        let p = field.p() as u64;
        let mut acc = 0u64;
        for (i, &c) in x.coeffs().iter().enumerate() {
            for (k, d) in field.digits(c).into_iter().enumerate() {
                acc += self.weights[i * e + k] as u64 * d as u64;
            }
        }
        (acc % p) as u32
    }
}

/// One level `m` with a chosen functional and torsion over a residue field.
#[derive(Clone, Debug)]
pub struct Level {
    pub m: FqPoly,
    pub psi: Functional,
    pub torsion: TorsionSet,
    residues: Vec<FqPoly>,
    /// Torsion point (coefficients) → `a` with `z = φ_a(λ)`.
    log: HashMap<Vec<u32>, usize>,
    /// Character table → `b`.
    chars: HashMap<Vec<u32>, usize>,
    units: Vec<usize>,
    /// `class[g_pos·|A/m| + y]` for unit position `g_pos`.
    class: Vec<usize>,
    /// Class of `(1, b)`.
    pi: Vec<usize>,
    pub orbit_count: usize,
    pub invariant_ok: bool,
}

impl Level {
    fn size(&self) -> usize {
        self.residues.len()
    }

    fn field(&self) -> &Field {
        self.m.field()
    }

    fn idx(&self, x: &FqPoly) -> usize {
        x.rem(&self.m).residue_index() as usize
    }

    fn unit_pos(&self, u: usize) -> usize {
        self.units.binary_search(&u).expect("unit")
    }

    /// `b ↦ (z ↦ ψ(a_z·b))` over the torsion points in order.
    fn table_of(&self, b: &FqPoly) -> Vec<u32> {
        let f = self.field();
        let mut t = vec![0; self.torsion.points.len()];
        for (i, z) in self.torsion.points.iter().enumerate() {
            let a = &self.residues[self.log[z.coeffs()]];
            t[i] = self.psi.eval(f, &a.mul_mod(b, &self.m));
        }
        t
    }

    /// The character `z ↦ χ_b(φ_a(z))`, identified by its table.
    fn act_on_char(&self, b: usize, a: &FqPoly) -> Result<usize> {
        let chi = self.table_of(&self.residues[b]);
        let phi = self.torsion.reduce_phi(&carlitz_phi(a)?.phi);
        let pos: HashMap<&[u32], usize> = self
            .torsion
            .points
            .iter()
            .enumerate()
            .map(|(i, z)| (z.coeffs(), i))
            .collect();
        let table: Vec<u32> = self
            .torsion
            .points
            .iter()
            .map(|z| chi[pos[phi.apply(z).coeffs()]])
            .collect();
        self.chars
            .get(&table)
            .copied()
            .ok_or_else(|| Error::PairingNotPerfect(format!("character table not realized mod {}", self.m)))
    }

    /// Image of a `Y_m` class under the ideal `a = a_m·a_c`, computed on every
    /// member of the class; `None` if the members disagree.
    fn act_on_class(&self, c: usize, a_m: &FqPoly, a_c: &FqPoly) -> Option<usize> {
        let n = self.size();
        let ac = self.idx(a_c);
        let mut out = None;
        for (gp, &g) in self.units.iter().enumerate() {
            for y in 0..n {
                if self.class[gp * n + y] != c {
                    continue;
                }
                let g2 = self.idx(&self.residues[g].mul_mod(&self.residues[ac], &self.m));
                let y2 = self.idx(&self.residues[y].mul_mod(a_m, &self.m));
                let c2 = self.class[self.unit_pos(g2) * n + y2];
                if out.is_some_and(|o| o != c2) {
                    return None;
                }
                out = Some(c2);
            }
        }
        out
    }

    /// Unit `u` acting on the group coordinate.
    fn unit_on_class(&self, c: usize, u: usize) -> Option<usize> {
        let n = self.size();
        let mut out = None;
        for (gp, &g) in self.units.iter().enumerate() {
            for y in 0..n {
                if self.class[gp * n + y] != c {
                    continue;
                }
                let g2 = self.idx(&self.residues[u].mul_mod(&self.residues[g], &self.m));
                let c2 = self.class[self.unit_pos(g2) * n + y];
                if out.is_some_and(|o| o != c2) {
                    return None;
                }
                out = Some(c2);
            }
        }
        out
    }

    pub fn pi(&self, b: usize) -> usize {
        self.pi[b]
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.orbit_count];
        for &c in &self.pi {
            if seen[c] {
                return false;
            }
            seen[c] = true;
        }
        self.pi.len() == self.orbit_count && seen.iter().all(|&s| s)
    }
}

/// Is `ψ(a·b) = 0 for all a` only for `b = 0`?
pub fn is_perfect(m: &FqPoly, psi: &Functional) -> bool {
    let field = m.field();
    let basis: Vec<FqPoly> = (0..m.deg())
        .flat_map(|i| {
            (0..field.e()).map(move |k| {
                let mut d = vec![0; field.e() as usize];
                d[k as usize] = 1;
                FqPoly::monomial(field, field.from_digits(&d), i)
            })
        })
        .collect();
    FqPoly::residues(field, m.deg()).skip(1).all(|b| {
        basis
            .iter()
            .any(|a| psi.eval(field, &a.mul_mod(&b, m)) != 0)
    })
}

/// First prime not dividing `m`, in canonical order.
pub fn good_prime(m: &FqPoly) -> Result<Prime> {
    for d in 1.. {
        for p in prime_table(m.field(), d, None)?.iter() {
            if !p.divides(m) {
                return Prime::finite(p);
            }
        }
    }
    unreachable!()
}

/// `X_m ≅ A/m ≅ Y_m`, using torsion at `p` (the first good prime by default).
pub fn build_level(m: &FqPoly, psi: &Functional, p: Option<&Prime>) -> Result<Level> {
    check_level(m)?;
    let p = match p {
        Some(p) => p.clone(),
        None => good_prime(m)?,
    };
    let torsion = torsion_points(m, &p, TORSION_SEARCH_BOUND)?;
    build_level_on(m, psi, torsion)
}

fn check_level(m: &FqPoly) -> Result<()> {
    if m.is_constant() || !m.is_monic() {
        return Err(Error::InvalidArgument(format!("level {m} must be monic of degree ≥ 1")));
    }
    let size = (m.field().q() as u64).checked_pow(m.deg() as u32).unwrap_or(u64::MAX);
    if size > LEVEL_LIMIT {
        return Err(Error::TooLarge {
            what: "A/m",
            size: size as u128,
            limit: LEVEL_LIMIT as u128,
        });
    }
    Ok(())
}

fn build_level_on(m: &FqPoly, psi: &Functional, torsion: TorsionSet) -> Result<Level> {
    let field = m.field();
    check_level(m)?;
    if !is_perfect(m, psi) {
        return Err(Error::PairingNotPerfect(format!(
            "ψ kills a nonzero ideal of A/({m})"
        )));
    }
    let residues: Vec<FqPoly> = FqPoly::residues(field, m.deg()).collect();
    let n = residues.len();
    let mut log = HashMap::new();
    for (i, a) in residues.iter().enumerate() {
        let z = if a.is_zero() {
            torsion.field.zero()
        } else {
            torsion.reduce_phi(&carlitz_phi(a)?.phi).apply(&torsion.generator)
        };
        if log.insert(z.coeffs().to_vec(), i).is_some() {
            return Err(Error::InvalidArgument(format!(
                "a ↦ φ_a(λ) is not injective mod {m}"
            )));
        }
    }
    let units: Vec<usize> = UnitGroup::new(m)?
        .elements()
        .iter()
        .map(|u| u.residue_index() as usize)
        .collect();
    let mut level = Level {
        m: m.clone(),
        psi: psi.clone(),
        torsion,
        residues,
        log,
        chars: HashMap::new(),
        units,
        class: Vec::new(),
        pi: Vec::new(),
        orbit_count: 0,
        invariant_ok: true,
    };
    for b in 0..n {
        let t = level.table_of(&level.residues[b].clone());
        level.chars.insert(t, b);
    }
    // orbits of (g, y) ~ (g·u^(−1), u·y)
    let nu = level.units.len();
    let mut class = vec![usize::MAX; nu * n];
    let mut invariants = Vec::new();
    let inv: Vec<usize> = level
        .units
        .iter()
        .map(|&u| level.idx(&level.residues[u].inv_mod(m).expect("unit")))
        .collect();
    for gp in 0..nu {
        for y in 0..n {
            if class[gp * n + y] != usize::MAX {
                continue;
            }
            let id = invariants.len();
            let g = &level.residues[level.units[gp]];
            let inv_gy = level.idx(&g.mul_mod(&level.residues[y], m));
            for (up, &u) in level.units.iter().enumerate() {
                let g2 = level.idx(&g.mul_mod(&level.residues[inv[up]], m));
                let y2 = level.idx(&level.residues[u].mul_mod(&level.residues[y], m));
                let k = level.unit_pos(g2) * n + y2;
                let gy2 = level.idx(&level.residues[g2].mul_mod(&level.residues[y2], m));
                if gy2 != inv_gy {
                    level.invariant_ok = false;
                }
                class[k] = id;
            }
            if invariants.contains(&inv_gy) {
                level.invariant_ok = false;
            }
            invariants.push(inv_gy);
        }
    }
    level.orbit_count = invariants.len();
    let one = level.unit_pos(level.idx(&FqPoly::one(field)));
    level.pi = (0..n).map(|b| class[one * n + b]).collect();
    level.class = class;
    Ok(level)
}

/// Split `a` into the part supported on primes dividing `m` and the rest.
fn split_ideal(a: &FqPoly, m: &FqPoly) -> Result<(FqPoly, FqPoly)> {
    let field = a.field();
    let (_, fs) = factor(a)?;
    let mut am = FqPoly::one(field);
    let mut ac = FqPoly::one(field);
    for (l, e) in fs {
        let le = l.pow(e);
        if l.divides(m) {
            am = &am * &le;
        } else {
            ac = &ac * &le;
        }
    }
    Ok((am, ac))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct EquivarianceReport {
    pub holds: bool,
    pub checks: usize,
    pub failures: Vec<String>,
}

/// `π_m(χ^a) = a·π_m(χ)` for every `χ` and every monic `a` of degree `≤ dmax`.
pub fn ideal_equivariance_check(level: &Level, dmax: u32) -> Result<EquivarianceReport> {
    let mut r = EquivarianceReport {
        holds: true,
        ..Default::default()
    };
    for d in 0..=dmax as usize {
        for a in FqPoly::monics(level.field(), d) {
            let (am, ac) = split_ideal(&a, &level.m)?;
            for b in 0..level.size() {
                r.checks += 1;
                let lhs = level.pi(level.act_on_char(b, &a)?);
                let rhs = level.act_on_class(level.pi(b), &am, &ac);
                if rhs != Some(lhs) {
                    r.holds = false;
                    r.failures.push(format!("a = {a}, b = {}", level.residues[b]));
                }
            }
        }
    }
    Ok(r)
}

/// `π_m(u·χ) = u·π_m(χ)` for every unit `u`, with the unit action on
/// characters cross-checked against the ideal `u + m`.
pub fn galois_equivariance_check(level: &Level) -> Result<EquivarianceReport> {
    let mut r = EquivarianceReport {
        holds: true,
        ..Default::default()
    };
    for &u in &level.units {
        let up = &level.residues[u];
        let rep = up + &level.m;
        for b in 0..level.size() {
            r.checks += 1;
            let via_unit = level.act_on_char(b, up)?;
            let via_ideal = level.act_on_char(b, &rep)?;
            let lhs = level.pi(via_unit);
            let rhs = level.unit_on_class(level.pi(b), u);
            if rhs != Some(lhs) || via_unit != via_ideal {
                r.holds = false;
                r.failures.push(format!("u = {up}, b = {}", level.residues[b]));
            }
        }
    }
    Ok(r)
}

/// A second perfect functional: the first in lexicographic order of weight
/// vectors that differs from `psi`.
pub fn alternate_functional(m: &FqPoly, psi: &Functional) -> Result<Functional> {
    let field = m.field();
    let len = psi.weights.len();
    let p = field.p() as u64;
    let total = p.checked_pow(len as u32).unwrap_or(u64::MAX);
    for code in 1..total {
        let mut w = vec![0u32; len];
        let mut c = code;
        for x in w.iter_mut().rev() {
            *x = (c % p) as u32;
            c /= p;
        }
        let f = Functional { weights: w };
        if f != *psi && is_perfect(m, &f) {
            return Ok(f);
        }
    }
    Err(Error::PairingNotPerfect(format!("no second perfect functional mod {m}")))
}

/// The unit `g` with `π'(χ) = g·π(χ)` for all `χ`, found by search.
pub fn unit_discrepancy(level: &Level, other: &Level) -> Option<FqPoly> {
    // characters of `other` are read back in the coordinates of `level`
    let by_table: HashMap<Vec<u32>, usize> = (0..other.size())
        .map(|b| (other.table_of(&other.residues[b]), b))
        .collect();
    let n = level.size();
    let translate: Vec<usize> = (0..n)
        .map(|b| {
            let t = other_table_on(level, other, b);
            by_table[&t]
        })
        .collect();
    level.units.iter().copied().find(|&u| {
        (0..n).all(|b| level.unit_on_class(level.pi(b), u) == Some(other.pi(translate[b])))
    })
    .map(|u| level.residues[u].clone())
}

/// Table of `level`'s character `b` in `other`'s point order.
fn other_table_on(level: &Level, other: &Level, b: usize) -> Vec<u32> {
    let t = level.table_of(&level.residues[b]);
    let pos: HashMap<&[u32], usize> = level
        .torsion
        .points
        .iter()
        .enumerate()
        .map(|(i, z)| (z.coeffs(), i))
        .collect();
    other
        .torsion
        .points
        .iter()
        .map(|z| t[pos[z.coeffs()]])
        .collect()
}

/// Restriction `X_{m'} → X_m` followed by `π_m` equals `π_{m'}` followed by
/// reduction `Y_{m'} → Y_m`.
pub fn quotient_square_check(m: &FqPoly, m2: &FqPoly) -> Result<EquivarianceReport> {
    if !m.divides(m2) {
        return Err(Error::InvalidArgument(format!("{m} does not divide {m2}")));
    }
    let field = m.field();
    let top = build_level(m2, &Functional::top_trace(field, m2.deg()), None)?;
    let t2 = &top.torsion;
    let cof = m2.div_rem(m).0;
    let lam = t2.reduce_phi(&carlitz_phi(&cof)?.phi).apply(&t2.generator);
    let phi_m = t2.reduce_phi(&carlitz_phi(m)?.phi);
    let sub = TorsionSet {
        m: m.clone(),
        p: t2.p.clone(),
        field: t2.field.clone(),
        s: t2.s,
        theta: t2.theta.clone(),
        points: t2
            .points
            .iter()
            .filter(|z| phi_m.apply(z).is_zero())
            .cloned()
            .collect(),
        generator: lam,
    };
    let low = build_level_on(m, &Functional::top_trace(field, m.deg()), sub)?;
    let mut r = EquivarianceReport {
        holds: true,
        ..Default::default()
    };
    let pos: HashMap<&[u32], usize> = top
        .torsion
        .points
        .iter()
        .enumerate()
        .map(|(i, z)| (z.coeffs(), i))
        .collect();
    for b2 in 0..top.size() {
        r.checks += 1;
        let t = top.table_of(&top.residues[b2]);
        let restricted: Vec<u32> = low
            .torsion
            .points
            .iter()
            .map(|z| t[pos[z.coeffs()]])
            .collect();
        let b = low.chars.get(&restricted).copied();
        let reduced = low.pi(low.idx(&top.residues[b2]));
        if b.map(|b| low.pi(b)) != Some(reduced) {
            r.holds = false;
            r.failures.push(format!("b' = {}", top.residues[b2]));
        }
    }
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct BcReport {
    pub m: String,
    pub prime: String,
    pub torsion_field_degree: usize,
    pub points: usize,
    pub orbits: usize,
    pub bijective: bool,
    pub ideal_equivariant: bool,
    pub ideal_checks: usize,
    pub galois_equivariant: bool,
    pub galois_checks: usize,
    /// `ψ` is the only perfect functional mod `m`.
    pub unique_functional: bool,
    pub unit_discrepancy_g: Option<String>,
}

/// Everything `bc-check` reports for one level.
pub fn bc_check(m: &FqPoly, dmax: u32) -> Result<BcReport> {
    let field = m.field();
    let m = m.monic();
    let psi = Functional::top_trace(field, m.deg());
    let level = build_level(&m, &psi, None)?;
    let ideal = ideal_equivariance_check(&level, dmax)?;
    let galois = galois_equivariance_check(&level)?;
    let p = Prime::finite(level.torsion.p.clone())?;
    let psi2 = match alternate_functional(&m, &psi) {
        Ok(f) => Some(f),
        Err(Error::PairingNotPerfect(_)) => None,
        Err(e) => return Err(e),
    };
    let discrepancy = match &psi2 {
        Some(f) => unit_discrepancy(&level, &build_level(&m, f, Some(&p))?).map(|g| g.to_string()),
        None => None,
    };
    Ok(BcReport {
        m: m.to_string(),
        prime: p.to_string(),
        torsion_field_degree: level.torsion.field.degree(),
        points: level.torsion.points.len(),
        orbits: level.orbit_count,
        bijective: level.is_bijective() && level.invariant_ok,
        ideal_equivariant: ideal.holds,
        ideal_checks: ideal.checks,
        galois_equivariant: galois.holds,
        galois_checks: galois.checks,
        unique_functional: psi2.is_none(),
        unit_discrepancy_g: discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(q: u32, s: &str) -> FqPoly {
        FqPoly::parse(&Field::prime(q).unwrap(), s).unwrap()
    }

    fn level(q: u32, m: &str) -> Level {
        let m = poly(q, m);
        build_level(&m, &Functional::top_trace(m.field(), m.deg()), None).unwrap()
    }

    #[test]
    fn small_levels_are_bijective() {
        for (q, m, n) in [(2, "T", 2), (3, "T", 3), (2, "T^2+T+1", 4)] {
            let l = level(q, m);
            assert_eq!(l.orbit_count, n);
            assert!(l.is_bijective() && l.invariant_ok);
            assert_eq!(l.pi(0), l.class[l.unit_pos(1) * n]);
        }
    }

    #[test]
    fn ideal_action_on_t_over_f3() {
        let l = level(3, "T");
        let a = poly(3, "T+2");
        let (am, ac) = split_ideal(&a, &l.m).unwrap();
        let zero = l.pi(0);
        assert_eq!(l.act_on_class(zero, &am, &ac), Some(zero));
        assert_eq!(l.act_on_class(l.pi(1), &am, &ac), Some(l.pi(2)));
        assert_eq!(l.act_on_class(l.pi(2), &am, &ac), Some(l.pi(1)));
        assert!(ideal_equivariance_check(&l, 2).unwrap().holds);
    }

    #[test]
    fn galois_on_quadratic_level() {
        let l = level(2, "T^2+T+1");
        let r = galois_equivariance_check(&l).unwrap();
        assert!(r.holds);
        assert_eq!(r.checks, 12);
    }

    #[test]
    fn psi_choices_differ_by_a_unit() {
        let r = bc_check(&poly(3, "T^2+1"), 2).unwrap();
        assert!(r.bijective && r.ideal_equivariant && r.galois_equivariant);
        assert!(r.unit_discrepancy_g.is_some() && !r.unique_functional);
        let r = bc_check(&poly(2, "T+1"), 2).unwrap();
        assert!(r.bijective && r.unique_functional && r.unit_discrepancy_g.is_none());
    }

    #[test]
    fn non_perfect_functional_is_rejected() {
        let m = poly(2, "T^2");
        let constant = Functional { weights: vec![1, 0] };
        assert!(!is_perfect(&m, &constant));
        assert!(matches!(
            build_level(&m, &constant, None),
            Err(Error::PairingNotPerfect(_))
        ));
    }

    #[test]
    fn square_t_t2() {
        let r = quotient_square_check(&poly(2, "T"), &poly(2, "T^2")).unwrap();
        assert!(r.holds && r.checks == 4);
    }
}
