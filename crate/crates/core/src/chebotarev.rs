//! Prime counts by Artin class against the Chebotarev main term.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::divisors::{ExtensionSpec, GaloisClass, Prime};
use crate::error::Result;
use crate::ffpoly::{count_irreducibles_u64, prime_table, PrimeCache};

pub const DEFAULT_C: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassRow {
    pub d: u32,
    pub class: String,
    pub a: u64,
    pub u: String,
    pub count: u64,
    pub prediction: f64,
    pub normalized_error: f64,
}

#[derive(Clone, Debug)]
pub struct ClassCountTable {
    pub ext: ExtensionSpec,
    pub dmax: u32,
    pub counts: BTreeMap<(u32, GaloisClass), u64>,
    pub rows: Vec<ClassRow>,
    /// Unramified primes of each degree `1..=dmax`.
    pub totals: Vec<u64>,
}

/// `n·q^d/(d·[L:K])` when `d ≡ a mod n`, else 0.
pub fn prediction(ext: &ExtensionSpec, d: u32, class: &GaloisClass) -> Result<f64> {
    let n = ext.n_finite()? as u64;
    if d as u64 % n != class.a % n {
        return Ok(0.0);
    }
    let q = ext.field().q() as f64;
    Ok(n as f64 * q.powi(d as i32) / (d as f64 * ext.degree()? as f64))
}

pub fn count_by_class(
    ext: &ExtensionSpec,
    dmax: u32,
    cache: Option<&PrimeCache>,
) -> Result<ClassCountTable> {
    let classes = ext.classes()?;
    let q = ext.field().q() as f64;
    let mut counts = BTreeMap::new();
    let mut rows = Vec::new();
    let mut totals = Vec::new();
    for d in 1..=dmax {
        let mut per: BTreeMap<GaloisClass, u64> = classes.iter().map(|c| (c.clone(), 0)).collect();
        let mut total = 0;
        for p in prime_table(ext.field(), d, cache)?.iter() {
            let p = Prime::Finite(p);
            if ext.is_ramified(&p) {
                continue;
            }
            *per.get_mut(&ext.artin_symbol(&p)?).expect("class") += 1;
            total += 1;
        }
        totals.push(total);
        for c in &classes {
            let count = per[c];
            let pred = prediction(ext, d, c)?;
            rows.push(ClassRow {
                d,
                class: c.to_string(),
                a: c.a,
                u: c.u.to_string(),
                count,
                prediction: pred,
                normalized_error: (count as f64 - pred).abs() / q.powf(d as f64 / 2.0),
            });
            counts.insert((d, c.clone()), count);
        }
    }
    Ok(ClassCountTable {
        ext: ext.clone(),
        dmax,
        counts,
        rows,
        totals,
    })
}

impl ClassCountTable {
    pub fn count(&self, d: u32, c: &GaloisClass) -> u64 {
        self.counts.get(&(d, c.clone())).copied().unwrap_or(0)
    }

    /// Row sums equal the number of irreducibles minus ramified primes.
    pub fn row_sums_match(&self) -> bool {
        let q = self.ext.field().q() as u64;
        let ram = self.ext.ramified_primes();
        (1..=self.dmax).all(|d| {
            let sum: u64 = self
                .rows
                .iter()
                .filter(|r| r.d == d)
                .map(|r| r.count)
                .sum();
            let r = ram.iter().filter(|p| p.degree() == d).count() as u64;
            count_irreducibles_u64(q, d).is_some_and(|n| sum == n - r)
        })
    }

    /// For `m = 1` the class of `p` is `deg p mod n`.
    pub fn constant_extension_consistent(&self) -> bool {
        if !self.ext.conductor().is_one() {
            return true;
        }
        let n = match self.ext.n_finite() {
            Ok(n) => n as u64,
            Err(_) => return false,
        };
        self.rows
            .iter()
            .all(|r| (r.count == 0) || r.a == r.d as u64 % n)
    }

    pub fn max_normalized_error(&self, dmin: u32) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.d >= dmin)
            .map(|r| r.normalized_error)
            .fold(0.0, f64::max)
    }
}

/// Every normalized error with `d ≥ n` is at most `c`.
pub fn density_check(table: &ClassCountTable, c: f64) -> Result<bool> {
    let n = table.ext.n_finite()?;
    Ok(table.max_normalized_error(n) <= c)
}
