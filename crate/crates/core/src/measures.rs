//! KMS measures on cylinder sets of `Y = Gal(L/K) × ∏_{p∉S} O_p/O_p*`.
//!
//! A point of `Y` is a Galois class together with a valuation at every
//! prime outside `S`. Divisors act by `D·(g, v) = (g·r(D)^(−1), v + D)`,
//! and `μ_β` is Haar measure on the Galois factor times the local laws
//! `μ_{β,p}(v_p = k) = x^(k·deg p)(1 − x^(deg p))`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::beta::Beta;
use crate::divisors::{enumerate_ideals, Divisor, ExtensionSpec, GaloisClass, Prime};
use crate::error::{Error, Result};
use crate::ffpoly::FqPoly;
use crate::mass::{parse_rat, rat_to_string, FormalMass};
use crate::zeta::Evaluation;

/// Largest `|Gal|` handled by the group-ring evaluation.
pub const GROUP_LIMIT: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

/// `μ_{β,p}(π^k O_p*) = x^(k·deg p)(1 − x^(deg p))`; zero for `k = ∞`.
pub fn local_mass(p: &Prime, k: Valuation) -> Result<FormalMass> {
    if p.is_infinite() {
        return Err(Error::InfinitePrime);
    }
    let d = p.degree() as usize;
    Ok(match k {
        Valuation::Finite(k) => {
            &FormalMass::x_pow(k as usize * d) - &FormalMass::x_pow((k as usize + 1) * d)
        }
        Valuation::Infinite => FormalMass::zero(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    Eq(u32),
    AtLeast(u32),
}

impl Constraint {
    pub fn admits(&self, v: i64) -> bool {
        match *self {
            Constraint::Eq(k) => v == k as i64,
            Constraint::AtLeast(k) => v >= k as i64,
        }
    }

    fn shifted(&self, by: u32) -> Constraint {
        match *self {
            Constraint::Eq(k) => Constraint::Eq(k + by),
            Constraint::AtLeast(k) => Constraint::AtLeast(k + by),
        }
    }
}

/// Valuation constraints at finitely many primes, and optionally a set of
/// allowed Galois classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cylinder {
    pub constraints: BTreeMap<Prime, Constraint>,
    pub galois: Option<BTreeSet<GaloisClass>>,
}

#[derive(Serialize, Deserialize)]
struct ConstraintJson {
    prime: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eq: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ge: Option<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CylinderJson {
    #[serde(default)]
    constraints: Vec<ConstraintJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    galois: Option<Vec<(u64, String)>>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    cylinder: CylinderJson,
}

#[derive(Serialize, Deserialize)]
struct FunctionJson {
    terms: Vec<TermJson>,
}

impl Cylinder {
    /// The whole space.
    pub fn everything() -> Self {
        Cylinder {
            constraints: BTreeMap::new(),
            galois: None,
        }
    }

    pub fn with(mut self, p: Prime, c: Constraint) -> Self {
        self.constraints.insert(p, c);
        self
    }

    pub fn with_galois(mut self, classes: impl IntoIterator<Item = GaloisClass>) -> Self {
        self.galois = Some(classes.into_iter().collect());
        self
    }

    pub fn contains(&self, class: &GaloisClass, vals: &Divisor) -> bool {
        self.constraints
            .iter()
            .all(|(p, c)| c.admits(vals.mult(p)))
            && self.galois.as_ref().is_none_or(|g| g.contains(class))
    }

    fn from_repr(ext: &ExtensionSpec, j: CylinderJson) -> Result<Self> {
        let field = ext.field();
        let mut z = Cylinder::everything();
        for c in j.constraints {
            let p = Prime::parse(field, &c.prime)?;
            let cons = match (c.eq, c.ge) {
                (Some(k), None) => Constraint::Eq(k),
                (None, Some(k)) => Constraint::AtLeast(k),
                _ => {
                    return Err(Error::Parse(format!(
                        "constraint on {p} needs exactly one of \"eq\", \"ge\""
                    )))
                }
            };
            if z.constraints.insert(p.clone(), cons).is_some() {
                return Err(Error::Parse(format!("prime {p} constrained twice")));
            }
        }
        if let Some(g) = j.galois {
            let mut set = BTreeSet::new();
            for (a, u) in g {
                set.insert(ext.class(a, &FqPoly::parse(field, &u)?)?);
            }
            z.galois = Some(set);
        }
        Ok(z)
    }

    fn to_repr(&self) -> CylinderJson {
        CylinderJson {
            constraints: self
                .constraints
                .iter()
                .map(|(p, c)| {
                    let (eq, ge) = match *c {
                        Constraint::Eq(k) => (Some(k), None),
                        Constraint::AtLeast(k) => (None, Some(k)),
                    };
                    ConstraintJson {
                        prime: p.to_string(),
                        eq,
                        ge,
                    }
                })
                .collect(),
            galois: self
                .galois
                .as_ref()
                .map(|g| g.iter().map(|c| (c.a, c.u.to_string())).collect()),
        }
    }

    /// `{"constraints":[{"prime":"T","eq":0},{"prime":"T+1","ge":1}],"galois":[[0,"1"]]}`
    pub fn from_json(ext: &ExtensionSpec, text: &str) -> Result<Self> {
        let j: CylinderJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Cylinder::from_repr(ext, j)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_repr()).expect("serializable")
    }
}

/// A finite rational combination of cylinder indicators.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderFn {
    pub terms: Vec<(BigRational, Cylinder)>,
}

impl CylinderFn {
    pub fn one() -> Self {
        CylinderFn::indicator(Cylinder::everything())
    }

    pub fn indicator(z: Cylinder) -> Self {
        CylinderFn {
            terms: vec![(BigRational::one(), z)],
        }
    }

    pub fn eval(&self, class: &GaloisClass, vals: &Divisor) -> BigRational {
        self.terms
            .iter()
            .filter(|(_, z)| z.contains(class, vals))
            .fold(BigRational::zero(), |acc, (c, _)| acc + c)
    }

    /// `Σ |c_i|`, a bound on `sup |f|`.
    pub fn sup_bound(&self) -> BigRational {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }

    /// Accepts a single cylinder object or `{"terms":[{"coeff":"1/2","cylinder":{…}}]}`.
    pub fn from_json(ext: &ExtensionSpec, text: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if v.get("terms").is_some() {
            let j: FunctionJson =
                serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
            let terms = j
                .terms
                .into_iter()
                .map(|t| Ok((parse_rat(&t.coeff)?, Cylinder::from_repr(ext, t.cylinder)?)))
                .collect::<Result<_>>()?;
            Ok(CylinderFn { terms })
        } else {
            let j: CylinderJson =
                serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(CylinderFn::indicator(Cylinder::from_repr(ext, j)?))
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FunctionJson {
            terms: self
                .terms
                .iter()
                .map(|(c, z)| TermJson {
                    coeff: rat_to_string(c),
                    cylinder: z.to_repr(),
                })
                .collect(),
        })
        .expect("serializable")
    }
}

/// Value of a state on `f·u_D`, with the truncated enumeration it was
/// checked against.
#[derive(Clone, Debug)]
pub struct StateValue {
    pub value: Evaluation,
    /// Direct sum over divisors of degree `≤ dmax`, normalized.
    pub truncated: Option<Evaluation>,
    /// `|value − truncated| ≤ tail_bound` held.
    pub consistent: bool,
}

impl StateValue {
    fn exact_only(v: Evaluation) -> Self {
        StateValue {
            value: v,
            truncated: None,
            consistent: true,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut j = self.value.to_json();
        if let Some(t) = &self.truncated {
            j["tail_bound"] = serde_json::json!(t.tail_bound);
            j["truncated_value"] = serde_json::json!(t.value);
            j["consistent"] = serde_json::json!(self.consistent);
        }
        j
    }
}

/// Value of a KMS₀ state: `χ(D)·∫f dμ₀` or zero.
#[derive(Clone, Debug)]
pub struct Kms0Value {
    pub in_kernel: bool,
    /// `χ(D) = exp(2πi·phase)`.
    pub phase: BigRational,
    pub integral: BigRational,
    pub re: f64,
    pub im: f64,
}

/// A character of the degree-zero Artin kernel, extended to all of `D_S`
/// through its phases on primes (in `ℚ/ℤ`). Primes of degree `≤ dmax` not
/// listed have phase 0; primes of higher degree are unknown.
#[derive(Clone, Debug, Default)]
pub struct PrimeCharacter {
    pub phases: BTreeMap<Prime, BigRational>,
    pub dmax: u32,
}

impl PrimeCharacter {
    pub fn trivial(dmax: u32) -> Self {
        PrimeCharacter {
            phases: BTreeMap::new(),
            dmax,
        }
    }

    pub fn phase(&self, d: &Divisor) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (p, k) in d.support() {
            if p.degree() > self.dmax {
                return Err(Error::Undecidable(p.to_string(), self.dmax));
            }
            if let Some(t) = self.phases.get(p) {
                acc += t * BigRational::from_integer(k.into());
            }
        }
        Ok(&acc - acc.floor())
    }

    /// Parse `"T:1/2, T+1:-1/2"`.
    pub fn parse(field: &crate::ffpoly::Field, s: &str, dmax: u32) -> Result<Self> {
        let mut phases = BTreeMap::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (p, t) = item
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse(format!("expected prime:phase, got {item:?}")))?;
            phases.insert(Prime::parse(field, p)?, parse_rat(t)?);
        }
        Ok(PrimeCharacter { phases, dmax })
    }
}

/// Dense group ring `T[G]` over `G = ℤ/n × (A/m)*`.
struct GroupRing<'a> {
    ext: &'a ExtensionSpec,
    classes: Vec<GaloisClass>,
    index: HashMap<GaloisClass, usize>,
    table: Vec<usize>,
}

impl<'a> GroupRing<'a> {
    fn new(ext: &'a ExtensionSpec) -> Result<Self> {
        let order = ext.degree()?;
        if order > GROUP_LIMIT {
            return Err(Error::TooLarge {
                what: "Galois group",
                size: order as u128,
                limit: GROUP_LIMIT as u128,
            });
        }
        let classes = ext.classes()?;
        let index: HashMap<GaloisClass, usize> = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        let n = classes.len();
        let mut table = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = index[&ext.compose(&classes[i], &classes[j])];
            }
        }
        Ok(GroupRing {
            ext,
            classes,
            index,
            table,
        })
    }

    fn len(&self) -> usize {
        self.classes.len()
    }

    fn delta<T: Scalar>(&self, c: &GaloisClass, coeff: T) -> Vec<T> {
        let mut v = vec![T::zero(); self.len()];
        v[self.index[c]] = coeff;
        v
    }

    fn mul<T: Scalar>(&self, a: &[T], b: &[T]) -> Vec<T> {
        let n = self.len();
        let mut out = vec![T::zero(); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    let k = self.table[i * n + j];
                    out[k] = out[k].clone() + x.clone() * y.clone();
                }
            }
        }
        out
    }

    fn class_of_poly(&self, f: &FqPoly) -> GaloisClass {
        self.ext
            .class(f.deg() as u64, f)
            .expect("polynomial coprime to the conductor")
    }
}

trait Scalar:
    Clone + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    fn from_int(n: &BigInt) -> Self;
    fn div(self, other: Self) -> Self;
}

impl Scalar for BigRational {
    fn from_int(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn div(self, other: Self) -> Self {
        self / other
    }
}

impl Scalar for f64 {
    fn from_int(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }
    fn div(self, other: Self) -> Self {
        self / other
    }
}

fn pow<T: Scalar>(x: &T, k: usize) -> T {
    (0..k).fold(T::one(), |acc, _| acc * x.clone())
}

/// An extension together with the finite primes of `S` (∞ is always in S).
#[derive(Clone, Debug)]
pub struct KmsSystem {
    ext: ExtensionSpec,
    s_finite: BTreeSet<Prime>,
}

impl KmsSystem {
    /// `S = {∞} ∪ {p | m} ∪ extra`.
    pub fn new(ext: &ExtensionSpec, extra: impl IntoIterator<Item = Prime>) -> Result<Self> {
        let mut s: BTreeSet<Prime> = ext.ramified_primes().into_iter().collect();
        for p in extra {
            if p.is_infinite() {
                continue;
            }
            s.insert(p);
        }
        Ok(KmsSystem {
            ext: ext.clone(),
            s_finite: s,
        })
    }

    pub fn ext(&self) -> &ExtensionSpec {
        &self.ext
    }

    /// Finite primes of `S`.
    pub fn s_finite(&self) -> &BTreeSet<Prime> {
        &self.s_finite
    }

    pub fn in_s(&self, p: &Prime) -> bool {
        p.is_infinite() || self.s_finite.contains(p)
    }

    fn check_cylinder(&self, z: &Cylinder) -> Result<()> {
        for p in z.constraints.keys() {
            if self.in_s(p) {
                return Err(Error::InvalidArgument(format!(
                    "prime {p} lies in S and carries no coordinate"
                )));
            }
        }
        if let Some(g) = &z.galois {
            for c in g {
                self.ext.class(c.a, &c.u)?;
            }
        }
        Ok(())
    }

    /// `μ_β(Z) = (|C|/|G|) ∏ local masses`, exactly in `x`.
    pub fn cylinder_mass(&self, z: &Cylinder) -> Result<FormalMass> {
        self.check_cylinder(z)?;
        let g = self.ext.degree()?;
        let frac = match &z.galois {
            None => BigRational::one(),
            Some(c) => BigRational::new(BigInt::from(c.len()), BigInt::from(g)),
        };
        let mut acc = FormalMass::constant(frac);
        for (p, c) in &z.constraints {
            let local = match *c {
                Constraint::Eq(k) => local_mass(p, Valuation::Finite(k))?,
                Constraint::AtLeast(k) => FormalMass::x_pow(k as usize * p.degree() as usize),
            };
            acc = &acc * &local;
        }
        Ok(acc)
    }

    /// `D·Z`: valuations shifted by `D`, Galois classes moved by `r(D)^(−1)`.
    pub fn translate(&self, z: &Cylinder, d: &Divisor) -> Result<Cylinder> {
        if !d.is_effective() {
            return Err(Error::InvalidArgument("divisor must be effective".into()));
        }
        let mut out = z.clone();
        for (p, k) in d.support() {
            if self.in_s(p) {
                return Err(Error::InvalidArgument(format!("{p} lies in S")));
            }
            let c = out
                .constraints
                .get(p)
                .map_or(Constraint::AtLeast(k as u32), |c| c.shifted(k as u32));
            out.constraints.insert(p.clone(), c);
        }
        if let Some(g) = &z.galois {
            let r_inv = self.ext.inverse(&self.ext.artin_of_divisor(d)?);
            out.galois = Some(g.iter().map(|c| self.ext.compose(c, &r_inv)).collect());
        }
        Ok(out)
    }

    /// `μ(D·Z) = x^(deg D)·μ(Z)` as polynomials.
    pub fn scaling_check(&self, z: &Cylinder, d: &Divisor) -> Result<bool> {
        let lhs = self.cylinder_mass(&self.translate(z, d)?)?;
        let rhs = self.cylinder_mass(z)?.shift(d.degree() as usize);
        Ok(lhs == rhs)
    }

    /// `F = Σ_{D ∈ D_S^+} x^(deg D)[r(D)]` in closed form.
    fn divisor_series<T: Scalar>(&self, ring: &GroupRing, x: &T) -> Result<Vec<T>> {
        let ext = &self.ext;
        let field = ext.field();
        let m = ext.conductor();
        let big_m = m.deg();
        let n = ext.n_finite()? as usize;
        let q = T::from_int(&BigInt::from(field.q()));
        let qx = q * x.clone();
        let mut f = vec![T::zero(); ring.len()];
        for d in 0..big_m {
            for g in FqPoly::monics(field, d) {
                if g.gcd(m).is_one() {
                    let i = ring.index[&ring.class_of_poly(&g)];
                    f[i] = f[i].clone() + pow(x, d);
                }
            }
        }
        // degrees ≥ deg m: residues are equidistributed, q^(d − deg m) each
        let units: Vec<T> = {
            let mut v = vec![T::zero(); ring.len()];
            for u in ext.units().elements() {
                v[ring.index[&ext.class(0, &u)?]] = T::one();
            }
            v
        };
        let phi = ext.class(1, &FqPoly::one(field))?;
        let mut phi_pow = ext.identity();
        for _ in 0..big_m {
            phi_pow = ext.compose(&phi_pow, &phi);
        }
        let mut cyc = vec![T::zero(); ring.len()];
        let mut ph = ext.identity();
        for j in 0..n {
            let i = ring.index[&ph];
            cyc[i] = cyc[i].clone() + pow(&qx, j);
            ph = ext.compose(&ph, &phi);
        }
        let denom = T::one() - pow(&qx, n);
        let head = ring.delta(&phi_pow, pow(x, big_m).div(denom));
        let tail = ring.mul(&ring.mul(&units, &head), &cyc);
        for (a, b) in f.iter_mut().zip(tail) {
            *a = a.clone() + b;
        }
        for p in &self.s_finite {
            if ext.is_ramified(p) {
                continue;
            }
            let pf = p.poly().expect("finite");
            let mut e = ring.delta(&ext.identity(), T::one());
            let i = ring.index[&ring.class_of_poly(pf)];
            e[i] = e[i].clone() - pow(x, pf.deg());
            f = ring.mul(&f, &e);
        }
        Ok(f)
    }

    /// `Σ_{D'} x^(deg D') f(D'w)` and `ζ_{K,S}` in closed form.
    fn gibbs_closed<T: Scalar>(&self, w: &GaloisClass, f: &CylinderFn, x: &T) -> Result<(T, T)> {
        let ext = &self.ext;
        let ring = GroupRing::new(ext)?;
        let series = self.divisor_series(&ring, x)?;
        let zeta = series.iter().fold(T::zero(), |a, b| a + b.clone());
        let mut total = T::zero();
        for (coeff, z) in &f.terms {
            self.check_cylinder(z)?;
            let mut e = series.clone();
            for (p, c) in &z.constraints {
                let pf = p.poly().expect("finite");
                let d = pf.deg();
                let h = ring.class_of_poly(pf);
                let (k, eq) = match *c {
                    Constraint::Eq(k) => (k as usize, true),
                    Constraint::AtLeast(k) => (k as usize, false),
                };
                let mut hk = ext.identity();
                for _ in 0..k {
                    hk = ext.compose(&hk, &h);
                }
                let mut factor = ring.delta(&hk, pow(x, k * d));
                if eq {
                    let hk1 = ext.compose(&hk, &h);
                    let i = ring.index[&hk1];
                    factor[i] = factor[i].clone() - pow(x, (k + 1) * d);
                }
                e = ring.mul(&e, &factor);
            }
            let mut s = T::zero();
            for (i, g) in ring.classes.iter().enumerate() {
                let point = ext.compose(w, &ext.inverse(g));
                if z.galois.as_ref().is_none_or(|c| c.contains(&point)) {
                    s = s + e[i].clone();
                }
            }
            let c = T::from_int(coeff.numer()).div(T::from_int(coeff.denom()));
            total = total + c * s;
        }
        Ok((total, zeta))
    }

    /// Direct sum over `D'` of degree `≤ dmax`, without normalization.
    fn gibbs_enumerated(
        &self,
        w: &GaloisClass,
        f: &CylinderFn,
        x: f64,
        dmax: u32,
    ) -> Result<f64> {
        let ext = &self.ext;
        let mut acc = 0.0;
        for d in enumerate_ideals(ext.field(), dmax)? {
            if d.support().any(|(p, _)| self.in_s(p)) {
                continue;
            }
            let point = ext.compose(w, &ext.inverse(&ext.artin_of_divisor(&d)?));
            let v = f.eval(&point, &d);
            if !v.is_zero() {
                acc += v.to_f64().unwrap_or(f64::NAN) * x.powi(d.degree() as i32);
            }
        }
        Ok(acc)
    }

    /// Extremal Gibbs state `φ_{β,w}(f u_D)` for `β > 1`.
    pub fn gibbs_eval(
        &self,
        beta: &Beta,
        w: &GaloisClass,
        f: &CylinderFn,
        d: &Divisor,
        dmax: u32,
    ) -> Result<StateValue> {
        if beta.is_negative() {
            return Err(Error::NegativeBeta);
        }
        if beta.cmp_f64(1.0) != std::cmp::Ordering::Greater || *beta == Beta::Infinity {
            return Err(Error::BetaOutOfRange(format!(
                "Gibbs states need 1 < β < ∞, got {beta}"
            )));
        }
        let w = self.ext.class(w.a, &w.u)?;
        for (_, z) in &f.terms {
            self.check_cylinder(z)?;
        }
        let q = self.ext.field().q();
        let xf = beta.x_f64(q);
        let qx = q as f64 * xf;
        if !d.is_zero() {
            return Ok(StateValue::exact_only(Evaluation::exact(BigRational::zero())));
        }
        let value = match beta.x_exact(q) {
            Some(x) => {
                let (s, z) = self.gibbs_closed(&w, f, &x)?;
                Evaluation::exact(s / z)
            }
            None => {
                let (s, z) = self.gibbs_closed(&w, f, &xf)?;
                Evaluation::approx(s / z, 0.0)
            }
        };
        let (_, zeta_f) = self.gibbs_closed(&w, &CylinderFn::one(), &xf)?;
        let truncated = self.gibbs_enumerated(&w, f, xf, dmax)? / zeta_f;
        let sup = f.sup_bound().to_f64().unwrap_or(f64::INFINITY);
        let tail = sup * qx.powi(dmax as i32 + 1) / (1.0 - qx) / zeta_f;
        let consistent = (value.value - truncated).abs() <= tail * (1.0 + 1e-9) + 1e-12;
        Ok(StateValue {
            value,
            truncated: Some(Evaluation::approx(truncated, tail)),
            consistent,
        })
    }

    /// `δ_{D,0}·∫f dμ_β` for `0 < β ≤ 1`.
    pub fn kms_eval(&self, beta: &Beta, f: &CylinderFn, d: &Divisor) -> Result<StateValue> {
        if beta.is_negative() {
            return Err(Error::NegativeBeta);
        }
        if beta.is_zero() || beta.cmp_f64(1.0) == std::cmp::Ordering::Greater {
            return Err(Error::BetaOutOfRange(format!(
                "the unique KMS state needs 0 < β ≤ 1, got {beta}"
            )));
        }
        let q = self.ext.field().q();
        let mut masses = Vec::new();
        for (c, z) in &f.terms {
            masses.push((c.clone(), self.cylinder_mass(z)?));
        }
        if !d.is_zero() {
            return Ok(StateValue::exact_only(Evaluation::exact(BigRational::zero())));
        }
        let value = match beta.x_exact(q) {
            Some(x) => {
                let mut acc = BigRational::zero();
                for (c, m) in &masses {
                    acc += c * m.eval_exact(&x)?;
                }
                Evaluation::exact(acc)
            }
            None => {
                let x = beta.x_f64(q);
                let v = masses
                    .iter()
                    .map(|(c, m)| c.to_f64().unwrap_or(f64::NAN) * m.eval_f64(x))
                    .sum();
                Evaluation::approx(v, 0.0)
            }
        };
        Ok(StateValue::exact_only(value))
    }

    /// Ground state `φ_{∞,w}(f u_D) = δ_{D,0} f(w)`.
    pub fn ground_eval(&self, w: &GaloisClass, f: &CylinderFn, d: &Divisor) -> Result<Evaluation> {
        let w = self.ext.class(w.a, &w.u)?;
        for (_, z) in &f.terms {
            self.check_cylinder(z)?;
        }
        if !d.is_zero() {
            return Ok(Evaluation::exact(BigRational::zero()));
        }
        Ok(Evaluation::exact(f.eval(&w, &Divisor::zero(self.ext.field()))))
    }

    /// KMS₀ state `τ_χ(f u_D) = χ(D)∫f dμ₀` on the degree-zero Artin kernel.
    pub fn kms0_eval(&self, chi: &PrimeCharacter, f: &CylinderFn, d: &Divisor) -> Result<Kms0Value> {
        for (p, _) in d.support() {
            if self.in_s(p) {
                return Err(Error::InvalidArgument(format!("{p} lies in S")));
            }
        }
        let g = self.ext.degree()?;
        let mut integral = BigRational::zero();
        for (c, z) in &f.terms {
            self.check_cylinder(z)?;
            // μ₀ sits on the classes with every valuation infinite
            if z.constraints.values().any(|c| matches!(c, Constraint::Eq(_))) {
                continue;
            }
            let frac = match &z.galois {
                None => BigRational::one(),
                Some(s) => BigRational::new(BigInt::from(s.len()), BigInt::from(g)),
            };
            integral += c * frac;
        }
        let in_kernel = d.degree() == 0 && self.ext.artin_of_divisor(d)? == self.ext.identity();
        if !in_kernel {
            return Ok(Kms0Value {
                in_kernel,
                phase: BigRational::zero(),
                integral,
                re: 0.0,
                im: 0.0,
            });
        }
        let phase = chi.phase(d)?;
        let theta = 2.0 * std::f64::consts::PI * phase.to_f64().unwrap_or(f64::NAN);
        let i = integral.to_f64().unwrap_or(f64::NAN);
        Ok(Kms0Value {
            in_kernel,
            phase,
            re: i * theta.cos(),
            im: i * theta.sin(),
            integral,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::Field;
    use crate::mass::rat;

    fn sys(q: u32, n: u32, m: &str) -> KmsSystem {
        let f = Field::prime(q).unwrap();
        KmsSystem::new(&ExtensionSpec::parse(&f, n, m).unwrap(), []).unwrap()
    }

    fn prime(s: &KmsSystem, p: &str) -> Prime {
        Prime::parse(s.ext().field(), p).unwrap()
    }

    #[test]
    fn local_masses() {
        let f2 = Field::prime(2).unwrap();
        let t = Prime::parse(&f2, "T").unwrap();
        let p2 = Prime::parse(&f2, "T^2+T+1").unwrap();
        assert_eq!(local_mass(&t, Valuation::Finite(0)).unwrap(), FormalMass::from_ints(&[1, -1]));
        assert_eq!(
            local_mass(&t, Valuation::Finite(2)).unwrap(),
            FormalMass::from_ints(&[0, 0, 1, -1])
        );
        assert_eq!(
            local_mass(&p2, Valuation::Finite(1)).unwrap(),
            FormalMass::from_ints(&[0, 0, 1, 0, -1])
        );
        assert!(local_mass(&t, Valuation::Infinite).unwrap().is_zero());
        assert!(local_mass(&Prime::Infinity, Valuation::Finite(0)).is_err());
    }

    #[test]
    fn cylinder_examples() {
        let s = sys(2, 1, "1");
        assert_eq!(s.cylinder_mass(&Cylinder::everything()).unwrap(), FormalMass::one());
        let z = Cylinder::everything().with(prime(&s, "T"), Constraint::Eq(0));
        assert_eq!(s.cylinder_mass(&z).unwrap(), FormalMass::from_ints(&[1, -1]));
        let z2 = Cylinder::everything()
            .with(prime(&s, "T"), Constraint::AtLeast(1))
            .with(prime(&s, "T+1"), Constraint::Eq(1));
        assert_eq!(s.cylinder_mass(&z2).unwrap(), FormalMass::from_ints(&[0, 0, 1, -1]));
    }

    #[test]
    fn scaling_examples() {
        let s = sys(2, 1, "1");
        let z = Cylinder::everything().with(prime(&s, "T"), Constraint::Eq(0));
        let d = Divisor::prime(s.ext().field(), prime(&s, "T"));
        assert!(s.scaling_check(&z, &d).unwrap());
        assert!(s.scaling_check(&z, &Divisor::zero(s.ext().field())).unwrap());
    }

    #[test]
    fn gibbs_examples() {
        let s = sys(2, 1, "1");
        let w = s.ext().identity();
        let zero = Divisor::zero(s.ext().field());
        let one = s.gibbs_eval(&Beta::integer(2), &w, &CylinderFn::one(), &zero, 10).unwrap();
        assert_eq!(one.value.exact, Some(rat(1, 1)));
        assert!(one.consistent);
        let z = Cylinder::everything().with(prime(&s, "T"), Constraint::Eq(0));
        let v = s
            .gibbs_eval(&Beta::integer(2), &w, &CylinderFn::indicator(z.clone()), &zero, 10)
            .unwrap();
        assert_eq!(v.value.exact, Some(rat(3, 4)));
        let dt = Divisor::prime(s.ext().field(), prime(&s, "T"));
        let v = s
            .gibbs_eval(&Beta::integer(2), &w, &CylinderFn::indicator(z), &dt, 10)
            .unwrap();
        assert_eq!(v.value.exact, Some(rat(0, 1)));
        assert!(matches!(
            s.gibbs_eval(&Beta::integer(1), &w, &CylinderFn::one(), &zero, 4),
            Err(Error::BetaOutOfRange(_))
        ));
        assert!(matches!(
            s.gibbs_eval(&Beta::integer(-1), &w, &CylinderFn::one(), &zero, 4),
            Err(Error::NegativeBeta)
        ));
    }

    #[test]
    fn gibbs_with_galois_constraint() {
        // n = 2, m = T over F_3: closed form agrees with enumeration
        let s = sys(3, 2, "T");
        let field = s.ext().field().clone();
        let w = s.ext().class(1, &FqPoly::constant(&field, 2)).unwrap();
        let z = Cylinder::everything()
            .with(prime(&s, "T+1"), Constraint::AtLeast(1))
            .with_galois([s.ext().identity()]);
        let f = CylinderFn::indicator(z);
        let v = s
            .gibbs_eval(&Beta::integer(3), &w, &f, &Divisor::zero(&field), 8)
            .unwrap();
        assert!(v.consistent, "{v:?}");
        assert!(v.value.exact.is_some());
    }

    #[test]
    fn ground_and_kms0() {
        let s = sys(2, 1, "1");
        let field = s.ext().field().clone();
        let w = s.ext().identity();
        let zero = Divisor::zero(&field);
        assert_eq!(
            s.ground_eval(&w, &CylinderFn::one(), &zero).unwrap().exact,
            Some(rat(1, 1))
        );
        let z = Cylinder::everything().with(prime(&s, "T"), Constraint::AtLeast(1));
        assert_eq!(
            s.ground_eval(&w, &CylinderFn::indicator(z), &zero).unwrap().exact,
            Some(rat(0, 1))
        );
        let chi = PrimeCharacter::trivial(4);
        let v = s.kms0_eval(&chi, &CylinderFn::one(), &zero).unwrap();
        assert!(v.in_kernel && v.re == 1.0);
        let dt = Divisor::prime(&field, prime(&s, "T"));
        assert!(!s.kms0_eval(&chi, &CylinderFn::one(), &dt).unwrap().in_kernel);
        let d0 = Divisor::parse(&field, "(T)*(T+1)^-1").unwrap();
        let chi = PrimeCharacter::parse(&field, "T:1/4", 4).unwrap();
        let v = s.kms0_eval(&chi, &CylinderFn::one(), &d0).unwrap();
        assert!(v.in_kernel);
        assert_eq!(v.phase, rat(1, 4));
        let far = Divisor::parse(&field, "(T^5+T^2+1)*(T)^-5").unwrap();
        assert!(matches!(
            s.kms0_eval(&chi, &CylinderFn::one(), &far),
            Err(Error::Undecidable(..))
        ));
    }

    #[test]
    fn cylinder_json() {
        let s = sys(2, 1, "T^2+T+1");
        let text = r#"{"constraints":[{"prime":"T","eq":0},{"prime":"T+1","ge":1}],"galois":[[0,"1"]]}"#;
        let z = Cylinder::from_json(s.ext(), text).unwrap();
        assert_eq!(Cylinder::from_json(s.ext(), &z.to_json().to_string()).unwrap(), z);
        assert!(Cylinder::from_json(s.ext(), r#"{"constraints":[{"prime":"T"}]}"#).is_err());
        assert!(Cylinder::from_json(s.ext(), r#"{"galois":[[0,"0"]]}"#).is_err());
        let f = CylinderFn::from_json(s.ext(), r#"{"terms":[{"coeff":"1/2","cylinder":{}}]}"#).unwrap();
        assert_eq!(f.terms[0].0, rat(1, 2));
    }
}
