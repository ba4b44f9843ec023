//! Primes and divisors of K = F_q(T), the extensions `F_{q^n}·K_m`, and
//! their Artin symbols.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffpoly::{factor, is_irreducible, prime_table, Field, FieldSpec, FqPoly, UnitGroup};

/// A place of K: the degree valuation at infinity or a monic irreducible.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Prime {
    Infinity,
    Finite(FqPoly),
}

impl Prime {
    /// Validates that `p` is monic irreducible.
    pub fn finite(p: FqPoly) -> Result<Self> {
        if !p.is_monic() || !is_irreducible(&p)? {
            return Err(Error::InvalidArgument(format!("{p} is not a monic irreducible")));
        }
        Ok(Prime::Finite(p))
    }

    pub fn degree(&self) -> u32 {
        match self {
            Prime::Infinity => 1,
            Prime::Finite(p) => p.deg() as u32,
        }
    }

    pub fn poly(&self) -> Option<&FqPoly> {
        match self {
            Prime::Infinity => None,
            Prime::Finite(p) => Some(p),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Prime::Infinity)
    }

    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            Ok(Prime::Infinity)
        } else {
            Prime::finite(FqPoly::parse(field, s)?)
        }
    }
}

/// Degree first, then lexicographic; ∞ precedes the finite primes of degree 1.
impl Ord for Prime {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        self.degree().cmp(&other.degree()).then_with(|| match (self, other) {
            (Prime::Infinity, Prime::Infinity) => Equal,
            (Prime::Infinity, _) => Less,
            (_, Prime::Infinity) => Greater,
            (Prime::Finite(a), Prime::Finite(b)) => a.cmp(b),
        })
    }
}

impl PartialOrd for Prime {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prime::Infinity => write!(f, "inf"),
            Prime::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// Finitely supported `Prime → ℤ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Divisor {
    field: Field,
    mults: BTreeMap<Prime, i64>,
}

impl Divisor {
    pub fn zero(field: &Field) -> Self {
        Divisor {
            field: field.clone(),
            mults: BTreeMap::new(),
        }
    }

    pub fn prime(field: &Field, p: Prime) -> Self {
        let mut d = Divisor::zero(field);
        d.add_prime(p, 1);
        d
    }

    /// Divisor of zeros of a nonzero polynomial on the finite primes.
    pub fn of_poly(f: &FqPoly) -> Result<Self> {
        let (_, fs) = factor(f)?;
        let mut d = Divisor::zero(f.field());
        for (p, e) in fs {
            d.add_prime(Prime::Finite(p), e as i64);
        }
        Ok(d)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn add_prime(&mut self, p: Prime, k: i64) {
        let e = self.mults.entry(p.clone()).or_insert(0);
        *e += k;
        if *e == 0 {
            self.mults.remove(&p);
        }
    }

    pub fn mult(&self, p: &Prime) -> i64 {
        self.mults.get(p).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Prime, i64)> {
        self.mults.iter().map(|(p, &k)| (p, k))
    }

    pub fn is_zero(&self) -> bool {
        self.mults.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.mults.values().all(|&k| k >= 0)
    }

    pub fn degree(&self) -> i64 {
        self.mults
            .iter()
            .map(|(p, &k)| p.degree() as i64 * k)
            .sum()
    }

    /// Monic generator of an effective divisor supported on finite primes.
    pub fn to_poly(&self) -> Option<FqPoly> {
        let mut acc = FqPoly::one(&self.field);
        for (p, &k) in &self.mults {
            match p {
                Prime::Finite(f) if k >= 0 => acc = &acc * &f.pow(k as u32),
                _ => return None,
            }
        }
        Some(acc)
    }

    pub fn plus(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, &k) in &other.mults {
            d.add_prime(p.clone(), k);
        }
        d
    }

    pub fn minus(&self, other: &Divisor) -> Divisor {
        self.plus(&other.scaled(-1))
    }

    pub fn scaled(&self, c: i64) -> Divisor {
        let mut d = Divisor::zero(&self.field);
        if c != 0 {
            for (p, &k) in &self.mults {
                d.mults.insert(p.clone(), k * c);
            }
        }
        d
    }

    /// Parse `"(T)^2*(T+1)"`, `"(T)^-1*(inf)"`, or `"1"` for zero.
    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut d = Divisor::zero(field);
        if s == "1" || s == "0" {
            return Ok(d);
        }
        let mut rest = s.as_str();
        loop {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' at {rest:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::Parse("unbalanced parenthesis".into()))?;
            let p = Prime::parse(field, &body[..close])?;
            rest = &body[close + 1..];
            let mut k = 1i64;
            if let Some(after) = rest.strip_prefix('^') {
                let end = after
                    .find('*')
                    .unwrap_or(after.len());
                k = after[..end]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent {:?}", &after[..end])))?;
                if k.unsigned_abs() > 1 << 20 {
                    return Err(Error::Parse(format!("exponent {k} out of range")));
                }
                rest = &after[end..];
            }
            d.add_prime(p, k);
            if rest.is_empty() {
                return Ok(d);
            }
            rest = rest
                .strip_prefix('*')
                .ok_or_else(|| Error::Parse(format!("expected '*' at {rest:?}")))?;
        }
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mults.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, &k)) in self.mults.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "({p})")?;
            if k != 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

/// Degree of the constant-field part of `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstDegree {
    Finite(u32),
    Infinite,
}

impl ConstDegree {
    pub fn finite(self) -> Result<u32> {
        match self {
            ConstDegree::Finite(n) => Ok(n),
            ConstDegree::Infinite => Err(Error::InvalidArgument(
                "n = ∞ is only available for reports".into(),
            )),
        }
    }
}

impl fmt::Display for ConstDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstDegree::Finite(n) => write!(f, "{n}"),
            ConstDegree::Infinite => write!(f, "inf"),
        }
    }
}

/// `L = F_{q^n}·K_m` over `K = F_q(T)`, with group `ℤ/n × (A/m)*`.
#[derive(Clone, Debug)]
pub struct ExtensionSpec {
    field: Field,
    n: ConstDegree,
    m: FqPoly,
    units: Arc<UnitGroup>,
}

impl PartialEq for ExtensionSpec {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.n == other.n && self.m == other.m
    }
}

#[derive(Serialize, Deserialize)]
struct ExtensionJson {
    q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field_modulus: Option<Vec<u32>>,
    n: serde_json::Value,
    m: String,
}

impl ExtensionSpec {
    pub fn new(field: &Field, n: ConstDegree, m: FqPoly) -> Result<Self> {
        if n == ConstDegree::Finite(0) {
            return Err(Error::InvalidArgument("n must be ≥ 1".into()));
        }
        if m.is_zero() {
            return Err(Error::InvalidArgument("conductor must be nonzero".into()));
        }
        if *m.field() != *field {
            return Err(Error::FieldMismatch(field.to_string(), m.field().to_string()));
        }
        let m = m.monic();
        let units = Arc::new(UnitGroup::new(&m)?);
        Ok(ExtensionSpec {
            field: field.clone(),
            n,
            m,
            units,
        })
    }

    /// Shorthand with a finite `n` and a conductor given as a string.
    pub fn parse(field: &Field, n: u32, m: &str) -> Result<Self> {
        ExtensionSpec::new(field, ConstDegree::Finite(n), FqPoly::parse(field, m)?)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> ConstDegree {
        self.n
    }

    pub fn n_finite(&self) -> Result<u32> {
        self.n.finite()
    }

    pub fn conductor(&self) -> &FqPoly {
        &self.m
    }

    pub fn units(&self) -> &UnitGroup {
        &self.units
    }

    /// `[L:K] = n·|(A/m)*|`.
    pub fn degree(&self) -> Result<u64> {
        Ok(self.n.finite()? as u64 * self.units.order())
    }

    pub fn is_ramified(&self, p: &Prime) -> bool {
        match p {
            Prime::Infinity => false,
            Prime::Finite(f) => f.divides(&self.m),
        }
    }

    /// Finite primes dividing the conductor.
    pub fn ramified_primes(&self) -> Vec<Prime> {
        if self.m.is_constant() {
            return Vec::new();
        }
        factor(&self.m)
            .expect("nonzero conductor")
            .1
            .into_iter()
            .map(|(p, _)| Prime::Finite(p))
            .collect()
    }

    pub fn identity(&self) -> GaloisClass {
        GaloisClass {
            a: 0,
            u: FqPoly::one(&self.field).rem(&self.m),
        }
    }

    /// Every class of the finite quotient `ℤ/n × (A/m)*`, `a` major.
    pub fn classes(&self) -> Result<Vec<GaloisClass>> {
        let n = self.n.finite()?;
        let units = self.units.elements();
        Ok((0..n as u64)
            .flat_map(|a| units.iter().map(move |u| GaloisClass { a, u: u.clone() }))
            .collect())
    }

    pub fn compose(&self, x: &GaloisClass, y: &GaloisClass) -> GaloisClass {
        let a = match self.n {
            ConstDegree::Finite(n) => (x.a + y.a) % n as u64,
            ConstDegree::Infinite => x.a + y.a,
        };
        GaloisClass {
            a,
            u: x.u.mul_mod(&y.u, &self.m),
        }
    }

    pub fn inverse(&self, x: &GaloisClass) -> GaloisClass {
        let a = match self.n {
            ConstDegree::Finite(n) => (n as u64 - x.a % n as u64) % n as u64,
            ConstDegree::Infinite => x.a.wrapping_neg(),
        };
        GaloisClass {
            a,
            u: x.u.inv_mod(&self.m).expect("unit"),
        }
    }

    /// Validate and normalize a class given by its coordinates.
    pub fn class(&self, a: u64, u: &FqPoly) -> Result<GaloisClass> {
        let u = u.rem(&self.m);
        if !self.units.contains(&u) {
            return Err(Error::InvalidArgument(format!("{u} is not a unit mod {}", self.m)));
        }
        let a = match self.n {
            ConstDegree::Finite(n) => a % n as u64,
            ConstDegree::Infinite => a,
        };
        Ok(GaloisClass { a, u })
    }

    /// Parse `"a,u"` such as `"1,T+1"`.
    pub fn parse_class(&self, s: &str) -> Result<GaloisClass> {
        let (a, u) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected \"a,u\", got {s:?}")))?;
        let a: u64 = a
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad degree class {a:?}")))?;
        self.class(a, &FqPoly::parse(&self.field, u)?)
    }

    /// Artin symbol `(deg p mod n, p mod m)`.
    pub fn artin_symbol(&self, p: &Prime) -> Result<GaloisClass> {
        match p {
            Prime::Infinity => Err(Error::InfinitePrime),
            Prime::Finite(f) if f.divides(&self.m) => Err(Error::Ramified(f.to_string())),
            Prime::Finite(f) => self.class(f.deg() as u64, f),
        }
    }

    /// Multiplicative extension to divisors supported away from `m` and ∞.
    pub fn artin_of_divisor(&self, d: &Divisor) -> Result<GaloisClass> {
        let mut acc = self.identity();
        for (p, k) in d.support() {
            let s = self.artin_symbol(p)?;
            let s = if k < 0 { self.inverse(&s) } else { s };
            for _ in 0..k.unsigned_abs() {
                acc = self.compose(&acc, &s);
            }
        }
        Ok(acc)
    }

    /// `n | deg p` and `p ≡ 1 mod m`, `p ∤ m`.
    pub fn is_split(&self, p: &FqPoly) -> bool {
        let n = match self.n {
            ConstDegree::Finite(n) => n as usize,
            ConstDegree::Infinite => return false,
        };
        p.deg() % n == 0 && !p.divides(&self.m) && {
            let one = FqPoly::one(&self.field).rem(&self.m);
            p.rem(&self.m) == one
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = match self.n {
            ConstDegree::Finite(n) => serde_json::json!(n),
            ConstDegree::Infinite => serde_json::json!("inf"),
        };
        let spec = self.field.spec();
        serde_json::to_value(ExtensionJson {
            q: self.field.q(),
            field_modulus: if spec.e > 1 { spec.modulus.clone() } else { None },
            n,
            m: self.m.to_string(),
        })
        .expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: ExtensionJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let field = field_from_q(j.q, j.field_modulus)?;
        let n = match &j.n {
            serde_json::Value::Number(x) => ConstDegree::Finite(
                x.as_u64()
                    .and_then(|v| u32::try_from(v).ok())
                    .ok_or_else(|| Error::Parse(format!("bad n {x}")))?,
            ),
            serde_json::Value::String(s) if s == "inf" => ConstDegree::Infinite,
            other => return Err(Error::Parse(format!("bad n {other}"))),
        };
        ExtensionSpec::new(&field, n, FqPoly::parse(&field, &j.m)?)
    }
}

/// Build F_q from `q` (a prime) or from `q = p^e` with an explicit modulus.
pub fn field_from_q(q: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
    match modulus {
        None => Field::prime(q),
        Some(m) => {
            let e = m.len().saturating_sub(1) as u32;
            let p = (2..=q)
                .find(|&p| q % p == 0)
                .ok_or(Error::NotPrime(q as u64))?;
            if (p as u64).checked_pow(e) != Some(q as u64) {
                return Err(Error::InvalidField(format!(
                    "q = {q} is not {p}^{e} for the given modulus"
                )));
            }
            Field::new(FieldSpec::prime_power(p, m))
        }
    }
}

/// An element `(a mod n, u mod m)` of `ℤ/n × (A/m)*`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct GaloisClass {
    pub a: u64,
    pub u: FqPoly,
}

impl fmt::Display for GaloisClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.u)
    }
}

/// All effective divisors of degree `≤ dmax` supported on finite primes,
/// ordered by degree and then by their monic generator.
pub fn enumerate_ideals(field: &Field, dmax: u32) -> Result<Vec<Divisor>> {
    let mut primes: Vec<FqPoly> = Vec::new();
    for d in 1..=dmax {
        primes.extend(prime_table(field, d, None)?.iter());
    }
    let mut out: Vec<(FqPoly, Divisor)> = Vec::new();
    // products p_{i1}·p_{i2}·… with i1 ≤ i2 ≤ …, depth-first
    fn walk(
        primes: &[FqPoly],
        start: usize,
        budget: usize,
        poly: &FqPoly,
        div: &Divisor,
        out: &mut Vec<(FqPoly, Divisor)>,
    ) {
        out.push((poly.clone(), div.clone()));
        for i in start..primes.len() {
            let p = &primes[i];
            if p.deg() > budget {
                break;
            }
            let mut d = div.clone();
            d.add_prime(Prime::Finite(p.clone()), 1);
            walk(primes, i, budget - p.deg(), &(poly * p), &d, out);
        }
    }
    walk(
        &primes,
        0,
        dmax as usize,
        &FqPoly::one(field),
        &Divisor::zero(field),
        &mut out,
    );
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, d)| d).collect())
}

/// Outcome of checking that the Artin kernel lives in degrees divisible by `n`.
#[derive(Clone, Debug)]
pub struct KernelCheck {
    pub holds: bool,
    pub checked: usize,
    pub kernel_size: usize,
    pub witnesses: Vec<Divisor>,
}

/// Every ideal of degree `≤ dmax`, coprime to `m`, whose Artin class is
/// trivial must have degree divisible by `n`.
pub fn artin_kernel_degree_check(ext: &ExtensionSpec, dmax: u32) -> Result<KernelCheck> {
    let n = ext.n_finite()? as i64;
    let id = ext.identity();
    let mut checked = 0;
    let mut kernel_size = 0;
    let mut witnesses = Vec::new();
    for d in enumerate_ideals(ext.field(), dmax)? {
        if d.support().any(|(p, _)| ext.is_ramified(p)) {
            continue;
        }
        checked += 1;
        if ext.artin_of_divisor(&d)? == id {
            kernel_size += 1;
            if d.degree() % n != 0 {
                witnesses.push(d);
            }
        }
    }
    Ok(KernelCheck {
        holds: witnesses.is_empty(),
        checked,
        kernel_size,
        witnesses,
    })
}

/// `#Pic⁺(O) = h(O)(q^{d_∞} − 1)/(q − 1)`, with `h = 1` and `d_∞ = 1`
/// for the rational function field.
pub fn pic_plus_order(field: &Field) -> u64 {
    let h = 1u64;
    let d_inf = 1u32;
    let q = field.q() as u64;
    h * (q.pow(d_inf) - 1) / (q - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Field {
        Field::prime(q).unwrap()
    }

    #[test]
    fn artin_examples() {
        let f2 = f(2);
        let ext = ExtensionSpec::parse(&f2, 2, "1").unwrap();
        let p = Prime::parse(&f2, "T").unwrap();
        assert_eq!(ext.artin_symbol(&p).unwrap().a, 1);

        let f3 = f(3);
        let ext = ExtensionSpec::parse(&f3, 1, "T").unwrap();
        let s = ext.artin_symbol(&Prime::parse(&f3, "T+2").unwrap()).unwrap();
        assert_eq!(s.u.to_string(), "2");
        assert!(matches!(
            ext.artin_symbol(&Prime::parse(&f3, "T").unwrap()),
            Err(Error::Ramified(_))
        ));
        assert!(matches!(ext.artin_symbol(&Prime::Infinity), Err(Error::InfinitePrime)));
    }

    #[test]
    fn divisor_strings() {
        let f2 = f(2);
        let d = Divisor::parse(&f2, "(T+1) * (T)^2").unwrap();
        assert_eq!(d.to_string(), "(T)^2*(T+1)");
        assert_eq!(d.degree(), 3);
        assert_eq!(d.to_poly().unwrap().to_string(), "T^3+T^2");
        assert_eq!(Divisor::parse(&f2, "1").unwrap().to_string(), "1");
        let e = Divisor::parse(&f2, "(T)^-1*(inf)").unwrap();
        assert_eq!(e.degree(), 0);
        assert!(!e.is_effective());
        assert_eq!(Divisor::parse(&f2, &e.to_string()).unwrap(), e);
        assert!(Divisor::parse(&f2, "(T^2+1)").is_err());
        assert!(Divisor::parse(&f2, "(T").is_err());
        assert!(Divisor::parse(&f2, "(T)^x").is_err());
    }

    #[test]
    fn ideal_counts() {
        let f2 = f(2);
        let ideals = enumerate_ideals(&f2, 1).unwrap();
        let names: Vec<String> = ideals.iter().map(|d| d.to_string()).collect();
        assert_eq!(names, vec!["1", "(T)", "(T+1)"]);
        assert_eq!(enumerate_ideals(&f2, 2).unwrap().len(), 7);
        let f3 = f(3);
        let ideals = enumerate_ideals(&f3, 4).unwrap();
        for d in 0..=4 {
            let c = ideals.iter().filter(|x| x.degree() == d).count();
            assert_eq!(c as u64, 3u64.pow(d as u32));
        }
    }

    #[test]
    fn kernel_lattice() {
        let f2 = f(2);
        for (n, m, dmax) in [(2, "1", 8), (3, "T", 9), (1, "T^2+T+1", 6)] {
            let ext = ExtensionSpec::parse(&f2, n, m).unwrap();
            let c = artin_kernel_degree_check(&ext, dmax).unwrap();
            assert!(c.holds && c.kernel_size > 0, "n={n} m={m}");
        }
    }

    #[test]
    fn pic_plus_is_trivial() {
        for q in [2, 3, 5] {
            assert_eq!(pic_plus_order(&f(q)), 1);
        }
    }

    #[test]
    fn json_round_trip() {
        let f3 = f(3);
        let ext = ExtensionSpec::parse(&f3, 2, "T^2+1").unwrap();
        let j = ext.to_json().to_string();
        assert_eq!(j, r#"{"m":"T^2+1","n":2,"q":3}"#);
        assert_eq!(ExtensionSpec::from_json(&j).unwrap(), ext);
        let inf = ExtensionSpec::from_json(r#"{"q":2,"n":"inf","m":"1"}"#).unwrap();
        assert_eq!(inf.n(), ConstDegree::Infinite);
    }
}
