use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ffpoly::Field;

/// Polynomial over F_q in the variable `T`, ascending coefficients, no
/// trailing zeros (the empty vector is the zero polynomial).
#[derive(Clone)]
pub struct FqPoly {
    field: Field,
    coeffs: Vec<u32>,
}

impl PartialEq for FqPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field == other.field
    }
}

impl Eq for FqPoly {}

impl Hash for FqPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Canonical order: by degree, then lexicographically on the ascending
/// coefficient sequence.
impl Ord for FqPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for FqPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FqPoly {
    pub fn new(field: &Field, mut coeffs: Vec<u32>) -> Self {
        let q = field.q();
        for c in coeffs.iter_mut() {
            if *c >= q {
                *c = field.from_int(*c as i64);
            }
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FqPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Self {
        FqPoly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: &Field, c: u32) -> Self {
        FqPoly::new(field, vec![c])
    }

    /// The variable `T`.
    pub fn t(field: &Field) -> Self {
        FqPoly::new(field, vec![0, 1])
    }

    pub fn monomial(field: &Field, c: u32, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        FqPoly::new(field, v)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = 0`; only for places where zero is excluded.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    /// Product with an explicit field-compatibility check.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_ref(other))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_ref(other))
    }

    fn add_ref(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        FqPoly::new(f, v)
    }

    fn sub_ref(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| f.sub(self.coeff(i), other.coeff(i)))
            .collect();
        FqPoly::new(f, v)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return FqPoly::zero(&self.field);
        }
        let f = &self.field;
        let mut v = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        FqPoly::new(f, v)
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = &self.field;
        FqPoly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiply by `T^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        FqPoly {
            field: self.field.clone(),
            coeffs: v,
        }
    }

    /// Scale to leading coefficient 1. The zero polynomial is returned as is.
    pub fn monic(&self) -> Self {
        match self.field.inv(self.leading()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let f = &self.field;
        if self.coeffs.len() < d.coeffs.len() {
            return (FqPoly::zero(f), self.clone());
        }
        let inv = f.inv(d.leading()).unwrap();
        let dl = d.coeffs.len();
        let mut r = self.coeffs.clone();
        let mut qv = vec![0u32; r.len() - dl + 1];
        for k in (0..qv.len()).rev() {
            let c = f.mul(r[k + dl - 1], inv);
            qv[k] = c;
            if c != 0 {
                for (i, &dc) in d.coeffs.iter().enumerate() {
                    r[k + i] = f.sub(r[k + i], f.mul(c, dc));
                }
            }
        }
        r.truncate(dl - 1);
        (FqPoly::new(f, qv), FqPoly::new(f, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    /// Monic gcd (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (FqPoly::one(f), FqPoly::zero(f));
        let (mut t0, mut t1) = (FqPoly::zero(f), FqPoly::one(f));
        while !r1.is_zero() {
            let (qt, r) = r0.div_rem(&r1);
            let s = &s0 - &(&qt * &s1);
            let t = &t0 - &(&qt * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match f.inv(r0.leading()) {
            Some(inv) => (r0.scale(inv), s0.scale(inv), t0.scale(inv)),
            None => (r0, s0, t0),
        }
    }

    /// Inverse modulo `m`, if `self` is a unit there.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.rem(m).ext_gcd(m);
        if g.is_one() {
            Some(s.rem(m))
        } else if m.deg() == 0 && !m.is_zero() {
            // A/(1) is the zero ring
            Some(FqPoly::zero(&self.field))
        } else {
            None
        }
    }

    pub fn mul_mod(&self, other: &Self, m: &Self) -> Self {
        (self * other).rem(m)
    }

    pub fn pow_mod(&self, mut k: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = FqPoly::one(&self.field).rem(m);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            base = base.mul_mod(&base, m);
            k >>= 1;
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = FqPoly::one(&self.field);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `self(T^k)`; equals `self^q` when `k = q` because coefficients lie in F_q.
    pub fn inflate(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0u32; (self.coeffs.len() - 1) * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * k] = c;
        }
        FqPoly::new(&self.field, v)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Index of a monic polynomial of degree `d` in lexicographic order of
    /// its ascending coefficient sequence (`c₀` most significant).
    pub fn lex_code(&self) -> u64 {
        let q = self.field.q() as u64;
        let d = self.deg();
        self.coeffs[..d].iter().fold(0u64, |acc, &c| acc * q + c as u64)
    }

    pub fn from_lex_code(field: &Field, d: usize, mut code: u64) -> Self {
        let q = field.q() as u64;
        let mut v = vec![0u32; d + 1];
        v[d] = 1;
        for i in (0..d).rev() {
            v[i] = (code % q) as u32;
            code /= q;
        }
        FqPoly::new(field, v)
    }

    /// Index of a residue of degree `< n`, base-q little-endian.
    pub fn residue_index(&self) -> u64 {
        let q = self.field.q() as u64;
        self.coeffs.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
    }

    pub fn from_residue_index(field: &Field, mut idx: u64) -> Self {
        let q = field.q() as u64;
        let mut v = Vec::new();
        while idx > 0 {
            v.push((idx % q) as u32);
            idx /= q;
        }
        FqPoly::new(field, v)
    }

    /// All monic polynomials of degree exactly `d`, lexicographic order.
    pub fn monics(field: &Field, d: usize) -> impl Iterator<Item = FqPoly> + '_ {
        let count = (field.q() as u64).pow(d as u32);
        (0..count).map(move |c| FqPoly::from_lex_code(field, d, c))
    }

    /// All polynomials of degree `< n` (residues modulo a degree-`n` modulus).
    pub fn residues(field: &Field, n: usize) -> impl Iterator<Item = FqPoly> + '_ {
        let count = (field.q() as u64).pow(n as u32);
        (0..count).map(move |i| FqPoly::from_residue_index(field, i))
    }

    /// Parse `"T^2+T+1"`, `"2*T + 1"`, `"T^3 - T"`, etc. Coefficients are
    /// field codes (`0..q`); the variable is `T`.
    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let bytes = s.as_bytes();
        let mut terms: Vec<(bool, &str)> = Vec::new();
        let mut start = 0;
        let mut neg = false;
        let mut i = 0;
        if bytes[0] == b'-' || bytes[0] == b'+' {
            neg = bytes[0] == b'-';
            start = 1;
            i = 1;
        }
        while i < bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && i > start {
                terms.push((neg, &s[start..i]));
                neg = bytes[i] == b'-';
                start = i + 1;
            }
            i += 1;
        }
        terms.push((neg, &s[start..]));
        let mut acc: Vec<u32> = Vec::new();
        for (neg, t) in terms {
            let (c, k) = parse_term(field, t)?;
            if k > MAX_PARSE_DEGREE {
                return Err(Error::Parse(format!("degree {k} too large")));
            }
            if acc.len() <= k {
                acc.resize(k + 1, 0);
            }
            let c = if neg { field.neg(c) } else { c };
            acc[k] = field.add(acc[k], c);
        }
        Ok(FqPoly::new(field, acc))
    }
}

const MAX_PARSE_DEGREE: usize = 1 << 16;

fn parse_coeff(field: &Field, s: &str) -> Result<u32> {
    let v: u64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))?;
    if v >= field.q() as u64 {
        return Err(Error::Parse(format!(
            "coefficient {v} is not a code of {field}"
        )));
    }
    Ok(v as u32)
}

fn parse_term(field: &Field, t: &str) -> Result<(u32, usize)> {
    if t.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let (coef_part, var_part) = match t.find('T') {
        None => return Ok((parse_coeff(field, t)?, 0)),
        Some(pos) => (&t[..pos], &t[pos + 1..]),
    };
    let c = if coef_part.is_empty() {
        1
    } else {
        let cp = coef_part
            .strip_suffix('*')
            .ok_or_else(|| Error::Parse(format!("expected '*' in term {t:?}")))?;
        parse_coeff(field, cp)?
    };
    let k = if var_part.is_empty() {
        1
    } else {
        let e = var_part
            .strip_prefix('^')
            .ok_or_else(|| Error::Parse(format!("expected '^' in term {t:?}")))?;
        e.parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad exponent in term {t:?}")))?
    };
    Ok((c, k))
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (1, c) => write!(f, "{c}*T")?,
                (k, 1) => write!(f, "T^{k}")?,
                (k, c) => write!(f, "{c}*T^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl<'a> $tr<&'a FqPoly> for &'a FqPoly {
            type Output = FqPoly;
            fn $m(self, rhs: &'a FqPoly) -> FqPoly {
                assert!(self.field == rhs.field, "field mismatch");
                self.$imp(rhs)
            }
        }
        impl $tr<FqPoly> for FqPoly {
            type Output = FqPoly;
            fn $m(self, rhs: FqPoly) -> FqPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl Neg for &FqPoly {
    type Output = FqPoly;
    fn neg(self) -> FqPoly {
        let f = &self.field;
        FqPoly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn mul_examples() {
        let f2 = f(2);
        let a = FqPoly::parse(&f2, "T+1").unwrap();
        assert_eq!((&a * &a).to_string(), "T^2+1");
        assert_eq!(&a * &FqPoly::one(&f2), a);
        let f3 = f(3);
        let t = FqPoly::t(&f3);
        let b = FqPoly::parse(&f3, "T+2").unwrap();
        assert_eq!((&t * &b).to_string(), "T^2+2*T");
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = FqPoly::t(&f(2));
        let b = FqPoly::t(&f(3));
        assert!(matches!(a.checked_mul(&b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn parse_and_display() {
        let f5 = f(5);
        let p = FqPoly::parse(&f5, " 3*T^4 - T + 2 ").unwrap();
        assert_eq!(p.coeffs(), &[2, 4, 0, 0, 3]);
        assert_eq!(p.to_string(), "3*T^4+4*T+2");
        assert_eq!(FqPoly::parse(&f5, &p.to_string()).unwrap(), p);
        assert!(FqPoly::parse(&f5, "7*T").is_err());
        assert!(FqPoly::parse(&f5, "T^").is_err());
        assert!(FqPoly::parse(&f5, "").is_err());
        assert!(FqPoly::parse(&f5, "++").is_err());
        assert_eq!(FqPoly::parse(&f5, "T-T").unwrap(), FqPoly::zero(&f5));
    }

    #[test]
    fn division_and_gcd() {
        let f3 = f(3);
        let a = FqPoly::parse(&f3, "T^3+2*T+1").unwrap();
        let b = FqPoly::parse(&f3, "T^2+1").unwrap();
        let (qt, r) = a.div_rem(&b);
        assert_eq!(&(&qt * &b) + &r, a);
        let g = (&a * &b).gcd(&(&b * &FqPoly::parse(&f3, "T+1").unwrap()));
        assert_eq!(g, b);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn lex_codes_order_ascending_sequences() {
        let f2 = f(2);
        let all: Vec<String> = FqPoly::monics(&f2, 1).map(|p| p.to_string()).collect();
        assert_eq!(all, vec!["T", "T+1"]);
        for p in FqPoly::monics(&f2, 3) {
            assert_eq!(FqPoly::from_lex_code(&f2, 3, p.lex_code()), p);
        }
    }
}
