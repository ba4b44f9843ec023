//! The constant field F_q.
//!
//! Elements are `u32` codes in `0..q`. For a prime field the code is the
//! residue itself. For `q = p^e` the code is `Σ dᵢ pⁱ` where `(d₀, …, d_{e-1})`
//! are the coordinates in the power basis of the defining modulus, so the
//! prime subfield sits at codes `0..p`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffpoly::irreducible::PrimeTable;

/// Largest prime accepted as a characteristic.
pub const MAX_PRIME: u32 = 65_521;
/// Largest `q = p^e` accepted for a proper prime power (arithmetic is tabulated).
pub const MAX_TABLE_Q: u32 = 256;

/// Description of a finite field F_q, q = p^e.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    /// Monic irreducible of degree `e` over F_p, ascending coefficients.
    /// Required when `e > 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn prime(p: u32) -> Self {
        FieldSpec {
            p,
            e: 1,
            modulus: None,
        }
    }

    pub fn prime_power(p: u32, modulus: Vec<u32>) -> Self {
        let e = modulus.len().saturating_sub(1) as u32;
        FieldSpec {
            p,
            e,
            modulus: Some(modulus),
        }
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug)]
enum Arith {
    Prime,
    Tables {
        add: Vec<u32>,
        mul: Vec<u32>,
        neg: Vec<u32>,
        inv: Vec<u32>,
    },
}

struct FieldInner {
    spec: FieldSpec,
    p: u32,
    q: u32,
    arith: Arith,
    primes: Mutex<HashMap<u32, Arc<PrimeTable>>>,
}

/// A validated finite field; cheap to clone and safe to share across threads.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.0.spec;
        if s.e == 1 {
            write!(f, "F_{}", s.p)
        } else {
            write!(f, "F_{}^{}[{:?}]", s.p, s.e, s.modulus.as_deref().unwrap_or(&[]))
        }
    }
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        if !is_prime_u64(spec.p as u64) {
            return Err(Error::NotPrime(spec.p as u64));
        }
        if spec.p > MAX_PRIME {
            return Err(Error::InvalidField(format!(
                "characteristic {} exceeds {}",
                spec.p, MAX_PRIME
            )));
        }
        if spec.e == 0 {
            return Err(Error::InvalidField("extension degree must be ≥ 1".into()));
        }
        if spec.e == 1 {
            if let Some(m) = &spec.modulus {
                if m.len() != 2 || m[1] != 1 || m[0] >= spec.p {
                    return Err(Error::InvalidField(
                        "a prime field takes no modulus (or a monic linear one)".into(),
                    ));
                }
            }
            let spec = FieldSpec::prime(spec.p);
            return Ok(Field(Arc::new(FieldInner {
                p: spec.p,
                q: spec.p,
                spec,
                arith: Arith::Prime,
                primes: Mutex::new(HashMap::new()),
            })));
        }
        let q = spec.q();
        if q > MAX_TABLE_Q as u64 {
            return Err(Error::InvalidField(format!(
                "q = {q} exceeds {MAX_TABLE_Q} for a prime-power field"
            )));
        }
        let modulus = spec.modulus.clone().ok_or_else(|| {
            Error::InvalidField(format!(
                "q = {}^{} needs an explicit modulus of degree {}",
                spec.p, spec.e, spec.e
            ))
        })?;
        if modulus.len() != spec.e as usize + 1
            || *modulus.last().unwrap() != 1
            || modulus.iter().any(|&c| c >= spec.p)
        {
            return Err(Error::InvalidField(format!(
                "modulus must be monic of degree {} with coefficients below {}",
                spec.e, spec.p
            )));
        }
        let base = Field::new(FieldSpec::prime(spec.p))?;
        let mpoly = crate::ffpoly::FqPoly::new(&base, modulus.clone());
        if !crate::ffpoly::is_irreducible(&mpoly)? {
            return Err(Error::InvalidField(format!(
                "modulus {mpoly} is reducible over F_{}",
                spec.p
            )));
        }
        let arith = build_tables(spec.p, spec.e as usize, &modulus);
        Ok(Field(Arc::new(FieldInner {
            spec,
            p: base.p(),
            q: q as u32,
            arith,
            primes: Mutex::new(HashMap::new()),
        })))
    }

    /// Shorthand for a prime field.
    pub fn prime(p: u32) -> Result<Self> {
        Field::new(FieldSpec::prime(p))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn e(&self) -> u32 {
        self.0.spec.e
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self.0.arith, Arith::Prime)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.0.arith {
            Arith::Prime => {
                let s = a + b;
                if s >= self.0.q {
                    s - self.0.q
                } else {
                    s
                }
            }
            Arith::Tables { add, .. } => add[(a * self.0.q + b) as usize],
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match &self.0.arith {
            Arith::Prime => {
                if a == 0 {
                    0
                } else {
                    self.0.q - a
                }
            }
            Arith::Tables { neg, .. } => neg[a as usize],
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.0.arith {
            Arith::Prime => ((a as u64 * b as u64) % self.0.q as u64) as u32,
            Arith::Tables { mul, .. } => mul[(a * self.0.q + b) as usize],
        }
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        match &self.0.arith {
            Arith::Prime => Some(self.pow(a, self.0.q as u64 - 2)),
            Arith::Tables { inv, .. } => Some(inv[a as usize]),
        }
    }

    pub fn pow(&self, a: u32, mut k: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    /// Absolute trace F_q → F_p; the result is a code in `0..p`.
    pub fn trace(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut t = a;
        for _ in 0..self.e() {
            acc = self.add(acc, t);
            t = self.pow(t, self.0.p as u64);
        }
        acc
    }

    /// Coordinates of `a` over F_p in the power basis, `e` digits.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        let p = self.0.p;
        let mut v = Vec::with_capacity(self.e() as usize);
        let mut x = a;
        for _ in 0..self.e() {
            v.push(x % p);
            x /= p;
        }
        v
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.0.p + x)
    }

    /// Memoized table of monic irreducibles of degree `d`, for small `q^d`.
    pub(crate) fn prime_table(&self, d: u32) -> Result<Arc<PrimeTable>> {
        const MEMO_LIMIT: u128 = 1 << 24;
        let size = (self.q() as u128).checked_pow(d).unwrap_or(u128::MAX);
        if size > MEMO_LIMIT {
            return crate::ffpoly::irreducible::sieve_irreducibles(self, d).map(Arc::new);
        }
        if let Some(t) = self.0.primes.lock().unwrap().get(&d) {
            return Ok(t.clone());
        }
        let t = Arc::new(crate::ffpoly::irreducible::sieve_irreducibles(self, d)?);
        self.0.primes.lock().unwrap().insert(d, t.clone());
        Ok(t)
    }
}

fn build_tables(p: u32, e: usize, modulus: &[u32]) -> Arith {
    let q = p.pow(e as u32) as usize;
    let digits = |mut x: usize| -> Vec<u32> {
        (0..e)
            .map(|_| {
                let d = (x % p as usize) as u32;
                x /= p as usize;
                d
            })
            .collect()
    };
    let code = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &x| acc * p + x) };
    let mut add = vec![0u32; q * q];
    let mut mul = vec![0u32; q * q];
    for a in 0..q {
        let da = digits(a);
        for b in 0..q {
            let db = digits(b);
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[a * q + b] = code(&s);
            // schoolbook product reduced by the monic modulus
            let mut prod = vec![0u32; 2 * e - 1];
            for (i, x) in da.iter().enumerate() {
                for (j, y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            for k in (e..prod.len()).rev() {
                let c = prod[k];
                if c != 0 {
                    for (i, &m) in modulus.iter().enumerate().take(e) {
                        let idx = k - e + i;
                        prod[idx] = (prod[idx] + (p - c) * m % p) % p;
                    }
                    prod[k] = 0;
                }
            }
            mul[a * q + b] = code(&prod[..e]);
        }
    }
    let mut neg = vec![0u32; q];
    let mut inv = vec![0u32; q];
    for a in 0..q {
        for b in 0..q {
            if add[a * q + b] == 0 {
                neg[a] = b as u32;
            }
            if mul[a * q + b] == 1 {
                inv[a] = b as u32;
            }
        }
    }
    Arith::Tables { add, mul, neg, inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), Some(5));
        assert_eq!(f.neg(0), 0);
        assert_eq!(f.from_int(-1), 6);
    }

    #[test]
    fn f4_tables() {
        // F_4 = F_2[a]/(a^2 + a + 1); code 2 is a, code 3 is a + 1
        let f = Field::new(FieldSpec::prime_power(2, vec![1, 1, 1])).unwrap();
        assert_eq!(f.q(), 4);
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(2, 3), 1);
        assert_eq!(f.add(2, 3), 1);
        for a in 1..4 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            assert_eq!(f.pow(a, 3), 1);
        }
        assert_eq!(f.trace(2), 1);
        assert_eq!(f.trace(1), 0);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(Field::prime(4), Err(Error::NotPrime(4))));
        assert!(Field::new(FieldSpec {
            p: 3,
            e: 2,
            modulus: None
        })
        .is_err());
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(Field::new(FieldSpec::prime_power(2, vec![1, 0, 1])).is_err());
    }
}
