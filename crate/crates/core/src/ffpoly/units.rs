use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ffpoly::{factor, FqPoly};

/// Brute-force ceiling on `q^deg m`.
pub const UNIT_GROUP_LIMIT: u64 = 1_000_000;

/// `(A/m)*` as a product of cyclic groups.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    modulus: FqPoly,
    order: u64,
    generators: Vec<(FqPoly, u64)>,
    /// residue index → exponents on `generators`
    dlog: HashMap<u64, Vec<u64>>,
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `q^deg m · ∏_{p|m} (1 − q^(−deg p))`.
pub fn unit_group_order_formula(m: &FqPoly) -> Result<u64> {
    let q = m.field().q() as u64;
    let (_, fs) = factor(m)?;
    let mut order = q.pow(m.deg() as u32);
    for (p, _) in fs {
        let np = q.pow(p.deg() as u32);
        order = order / np * (np - 1);
    }
    Ok(order)
}

impl UnitGroup {
    pub fn new(m: &FqPoly) -> Result<Self> {
        if m.is_zero() {
            return Err(Error::InvalidArgument("modulus must be nonzero".into()));
        }
        let field = m.field().clone();
        let m = m.monic();
        let size = (field.q() as u128).saturating_pow(m.deg() as u32);
        if size > UNIT_GROUP_LIMIT as u128 {
            return Err(Error::TooLarge {
                what: "residue ring",
                size,
                limit: UNIT_GROUP_LIMIT as u128,
            });
        }
        let one = FqPoly::one(&field).rem(&m);
        let n = m.deg();
        let units: Vec<FqPoly> = FqPoly::residues(&field, n)
            .filter(|r| r.gcd(&m).is_one())
            .collect();
        let order = units.len() as u64;

        let mut generators = Vec::new();
        for (ell, a) in prime_factors(order) {
            let pa = ell.pow(a);
            let sylow: Vec<&FqPoly> = units
                .iter()
                .filter(|u| u.pow_mod(pa as u128, &m) == one)
                .collect();
            let mut gens: Vec<(FqPoly, u64)> = Vec::new();
            let mut table = span(&gens, &m);
            while (table.len() as u64) < pa {
                // element of largest order modulo the current subgroup
                let mut best: Option<(&FqPoly, u64, FqPoly)> = None;
                for &y in &sylow {
                    let mut o = 1u64;
                    let mut z = y.clone();
                    while !table.contains_key(&z.residue_index()) {
                        z = z.pow_mod(ell as u128, &m);
                        o *= ell;
                    }
                    if best.as_ref().is_none_or(|b| o > b.1) {
                        best = Some((y, o, z));
                    }
                }
                let (y, o, h) = best.unwrap();
                // y^o = h = ∏ g_i^(e_i); correct y by ∏ g_i^(e_i / o)
                let exps = &table[&h.residue_index()];
                let mut z = one.clone();
                for ((g, _), &e) in gens.iter().zip(exps) {
                    debug_assert_eq!(e % o, 0);
                    z = z.mul_mod(&g.pow_mod((e / o) as u128, &m), &m);
                }
                let lifted = y.mul_mod(&z.inv_mod(&m).unwrap(), &m);
                gens.push((lifted, o));
                table = span(&gens, &m);
            }
            generators.extend(gens);
        }
        let dlog = span(&generators, &m);
        debug_assert_eq!(dlog.len() as u64, order);
        Ok(UnitGroup {
            modulus: m,
            order,
            generators,
            dlog,
        })
    }

    pub fn modulus(&self) -> &FqPoly {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Generators with their orders; the product of the orders is the group order.
    pub fn generators(&self) -> &[(FqPoly, u64)] {
        &self.generators
    }

    pub fn is_cyclic(&self) -> bool {
        let mut seen: Vec<u64> = Vec::new();
        for (_, o) in &self.generators {
            let p = prime_factors(*o)[0].0;
            if seen.contains(&p) {
                return false;
            }
            seen.push(p);
        }
        true
    }

    pub fn contains(&self, u: &FqPoly) -> bool {
        self.dlog.contains_key(&u.rem(&self.modulus).residue_index())
    }

    /// Exponent vector of `u` on the generators, `None` for non-units.
    pub fn discrete_log(&self, u: &FqPoly) -> Option<&[u64]> {
        self.dlog
            .get(&u.rem(&self.modulus).residue_index())
            .map(|v| v.as_slice())
    }

    pub fn element(&self, exps: &[u64]) -> FqPoly {
        let m = &self.modulus;
        let mut acc = FqPoly::one(m.field()).rem(m);
        for ((g, o), &e) in self.generators.iter().zip(exps) {
            acc = acc.mul_mod(&g.pow_mod((e % o) as u128, m), m);
        }
        acc
    }

    /// All units, ordered by residue index.
    pub fn elements(&self) -> Vec<FqPoly> {
        let mut idx: Vec<u64> = self.dlog.keys().copied().collect();
        idx.sort_unstable();
        idx.into_iter()
            .map(|i| FqPoly::from_residue_index(self.modulus.field(), i))
            .collect()
    }

    pub fn element_order(&self, u: &FqPoly) -> Option<u64> {
        let exps = self.discrete_log(u)?;
        Some(
            self.generators
                .iter()
                .zip(exps)
                .map(|((_, o), &e)| o / num_integer::gcd(*o, e))
                .fold(1, num_integer::lcm),
        )
    }
}

/// Table of `∏ g_i^(e_i)` over the full exponent box.
fn span(gens: &[(FqPoly, u64)], m: &FqPoly) -> HashMap<u64, Vec<u64>> {
    let one = FqPoly::one(m.field()).rem(m);
    let mut table = HashMap::new();
    table.insert(one.residue_index(), vec![0; gens.len()]);
    let mut frontier = vec![(one, vec![0u64; gens.len()])];
    for (i, (g, o)) in gens.iter().enumerate() {
        let mut next = Vec::with_capacity(frontier.len() * *o as usize);
        for (x, e) in frontier {
            let mut y = x;
            for k in 0..*o {
                let mut ek = e.clone();
                ek[i] = k;
                table.insert(y.residue_index(), ek.clone());
                next.push((y.clone(), ek));
                y = y.mul_mod(g, m);
            }
        }
        frontier = next;
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::Field;

    fn group(q: u32, m: &str) -> UnitGroup {
        let f = Field::prime(q).unwrap();
        UnitGroup::new(&FqPoly::parse(&f, m).unwrap()).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(group(3, "T").order(), 2);
        let g = group(2, "T^2+T+1");
        assert_eq!(g.order(), 3);
        assert!(g.is_cyclic());
        assert_eq!(group(2, "T^2").order(), 2);
        assert_eq!(group(2, "1").order(), 1);
    }

    #[test]
    fn non_cyclic_group() {
        // (F_2[T]/T^4)* ≅ Z/4 × Z/2
        let g = group(2, "T^4");
        assert_eq!(g.order(), 8);
        assert!(!g.is_cyclic());
        let prod: u64 = g.generators().iter().map(|(_, o)| o).product();
        assert_eq!(prod, 8);
        for u in g.elements() {
            let e = g.discrete_log(&u).unwrap().to_vec();
            assert_eq!(g.element(&e), u);
        }
    }

    #[test]
    fn order_matches_formula() {
        for (q, m) in [(3, "T^3+T"), (5, "T^2"), (2, "T^5+T"), (3, "T^4+2")] {
            let f = Field::prime(q).unwrap();
            let m = FqPoly::parse(&f, m).unwrap();
            let g = UnitGroup::new(&m).unwrap();
            assert_eq!(g.order(), unit_group_order_formula(&m).unwrap());
            let prod: u64 = g.generators().iter().map(|(_, o)| o).product();
            assert_eq!(prod, g.order());
        }
    }

    #[test]
    fn too_large() {
        let f = Field::prime(2).unwrap();
        let m = FqPoly::monomial(&f, 1, 21);
        assert!(matches!(UnitGroup::new(&m), Err(Error::TooLarge { .. })));
    }
}
