//! Twisted polynomials `R{τ}` with `τa = a^q τ`, the Carlitz module
//! `φ_T = T + τ`, its torsion over residue fields, and the truncated
//! Carlitz exponential.

use std::fmt;

use serde::Serialize;

use crate::divisors::Prime;
use crate::error::{Error, Result};
use crate::ffpoly::{factor, ExtField, Field, FqPoly};

/// A coefficient ring carrying the q-power Frobenius.
pub trait TwistRing: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `a ↦ a^q`.
    fn frob(&self, a: &Self::Elem) -> Self::Elem;
}

/// `A = F_q[T]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing(pub Field);

impl TwistRing for PolyRing {
    type Elem = FqPoly;
    fn zero(&self) -> FqPoly {
        FqPoly::zero(&self.0)
    }
    fn one(&self) -> FqPoly {
        FqPoly::one(&self.0)
    }
    fn is_zero(&self, a: &FqPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        a + b
    }
    fn neg(&self, a: &FqPoly) -> FqPoly {
        -a
    }
    fn mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        a * b
    }
    fn frob(&self, a: &FqPoly) -> FqPoly {
        // coefficients lie in F_q, so a^q = a(T^q)
        a.inflate(self.0.q() as usize)
    }
}

impl TwistRing for ExtField {
    type Elem = FqPoly;
    fn zero(&self) -> FqPoly {
        ExtField::zero(self)
    }
    fn one(&self) -> FqPoly {
        ExtField::one(self)
    }
    fn is_zero(&self, a: &FqPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        ExtField::add(self, a, b)
    }
    fn neg(&self, a: &FqPoly) -> FqPoly {
        -a
    }
    fn mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        ExtField::mul(self, a, b)
    }
    fn frob(&self, a: &FqPoly) -> FqPoly {
        ExtField::frob(self, a)
    }
}

/// `Σ c_i τ^i`, coefficients ascending in τ.
#[derive(Clone, PartialEq)]
pub struct TwistedPoly<R: TwistRing> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: TwistRing> fmt::Debug for TwistedPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl<R: TwistRing> TwistedPoly<R> {
    pub fn new(ring: &R, mut coeffs: Vec<R::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        TwistedPoly {
            ring: ring.clone(),
            coeffs,
        }
    }

    pub fn zero(ring: &R) -> Self {
        TwistedPoly::new(ring, Vec::new())
    }

    pub fn constant(ring: &R, c: R::Elem) -> Self {
        TwistedPoly::new(ring, vec![c])
    }

    pub fn one(ring: &R) -> Self {
        TwistedPoly::constant(ring, ring.one())
    }

    /// `τ^k`.
    pub fn tau_pow(ring: &R, k: usize) -> Self {
        let mut c = vec![ring.zero(); k + 1];
        c[k] = ring.one();
        TwistedPoly::new(ring, c)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// τ-degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&R::Elem> {
        self.coeffs.last()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| self.ring.add(&self.coeff(i), &other.coeff(i)))
            .collect();
        Ok(TwistedPoly::new(&self.ring, c))
    }

    pub fn neg(&self) -> Self {
        let c = self.coeffs.iter().map(|a| self.ring.neg(a)).collect();
        TwistedPoly::new(&self.ring, c)
    }

    /// `(Σ a_i τ^i)(Σ b_j τ^j) = Σ a_i b_j^(q^i) τ^(i+j)`.
    pub fn twisted_mul(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(TwistedPoly::zero(&self.ring));
        }
        let r = &self.ring;
        let mut out = vec![r.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        let mut b_tw: Vec<R::Elem> = other.coeffs.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if !r.is_zero(a) {
                for (j, b) in b_tw.iter().enumerate() {
                    out[i + j] = r.add(&out[i + j], &r.mul(a, b));
                }
            }
            b_tw = b_tw.iter().map(|b| r.frob(b)).collect();
        }
        Ok(TwistedPoly::new(r, out))
    }

    /// The additive polynomial `Σ c_i z^(q^i)` evaluated at `z`.
    pub fn apply(&self, z: &R::Elem) -> R::Elem {
        let r = &self.ring;
        let mut acc = r.zero();
        let mut zi = z.clone();
        for c in &self.coeffs {
            acc = r.add(&acc, &r.mul(c, &zi));
            zi = r.frob(&zi);
        }
        acc
    }

    /// Apply a ring map to every coefficient.
    pub fn map<S: TwistRing>(&self, target: &S, f: impl Fn(&R::Elem) -> S::Elem) -> TwistedPoly<S> {
        TwistedPoly::new(target, self.coeffs.iter().map(f).collect())
    }
}

impl TwistedPoly<PolyRing> {
    /// Parse `"T^2 + (T^2+T)*t + t^2"`; `τ` is accepted for `t`.
    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        let ring = PolyRing(field.clone());
        let s: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == 'τ' { 't' } else { c })
            .collect();
        if s.is_empty() {
            return Err(Error::Parse("empty twisted polynomial".into()));
        }
        let mut terms: Vec<(bool, &str)> = Vec::new();
        let (mut depth, mut start, mut neg) = (0i32, 0usize, false);
        for (i, ch) in s.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return Err(Error::Parse("unbalanced ')'".into()));
                    }
                }
                '+' | '-' if depth == 0 => {
                    if i > start {
                        terms.push((neg, &s[start..i]));
                    } else if i > 0 {
                        return Err(Error::Parse("empty term".into()));
                    }
                    neg = ch == '-';
                    start = i + 1;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(Error::Parse("unbalanced '('".into()));
        }
        terms.push((neg, &s[start..]));
        let mut acc = TwistedPoly::zero(&ring);
        for (neg, t) in terms {
            let (c, k) = parse_twisted_term(field, t)?;
            if k > MAX_TAU_DEGREE {
                return Err(Error::Parse(format!("τ-degree {k} too large")));
            }
            let c = if neg { -&c } else { c };
            let mut v = vec![FqPoly::zero(field); k + 1];
            v[k] = c;
            acc = acc.checked_add(&TwistedPoly::new(&ring, v))?;
        }
        Ok(acc)
    }
}

const MAX_TAU_DEGREE: usize = 1 << 12;

fn parse_twisted_term(field: &Field, t: &str) -> Result<(FqPoly, usize)> {
    if t.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let top_t = {
        let mut depth = 0;
        let mut pos = None;
        for (i, ch) in t.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                't' if depth == 0 => pos = Some(i),
                _ => {}
            }
        }
        pos
    };
    let (coef, k) = match top_t {
        None => (t, 0),
        Some(i) => {
            let k = match &t[i + 1..] {
                "" => 1,
                rest => rest
                    .strip_prefix('^')
                    .and_then(|e| e.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad τ exponent in {t:?}")))?,
            };
            let left = &t[..i];
            let coef = match left.strip_suffix('*') {
                Some(c) if !c.is_empty() => c,
                Some(_) => return Err(Error::Parse(format!("dangling '*' in {t:?}"))),
                None if left.is_empty() => "1",
                None => return Err(Error::Parse(format!("expected '*' before t in {t:?}"))),
            };
            (coef, k)
        }
    };
    let coef = match coef.strip_prefix('(') {
        Some(inner) => inner
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("bad parentheses in {t:?}")))?,
        None => coef,
    };
    Ok((FqPoly::parse(field, coef)?, k))
}

impl<R: TwistRing> fmt::Display for TwistedPoly<R>
where
    R::Elem: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = c.to_string();
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            match (i, c == &self.ring.one()) {
                (0, _) => write!(f, "{cs}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{cs}*t")?,
                (i, true) => write!(f, "t^{i}")?,
                (i, false) => write!(f, "{cs}*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// `φ_a` for the Carlitz module.
#[derive(Clone, Debug, PartialEq)]
pub struct CarlitzPhi {
    pub a: FqPoly,
    pub phi: TwistedPoly<PolyRing>,
}

impl CarlitzPhi {
    /// Constant term `a`, τ-degree `deg a`, leading coefficient `lc(a)`.
    pub fn satisfies_invariants(&self) -> bool {
        let lc = FqPoly::constant(self.a.field(), self.a.leading());
        self.phi.coeff(0) == self.a
            && self.phi.degree() == Some(self.a.deg())
            && self.phi.leading() == Some(&lc)
    }
}

/// `φ_T = T + τ`.
pub fn carlitz_t(field: &Field) -> TwistedPoly<PolyRing> {
    let ring = PolyRing(field.clone());
    TwistedPoly::new(&ring, vec![FqPoly::t(field), FqPoly::one(field)])
}

/// `φ_a = Σ a_i φ_T^i`, by Horner's rule.
pub fn carlitz_phi(a: &FqPoly) -> Result<CarlitzPhi> {
    if a.is_zero() {
        return Err(Error::InvalidArgument("φ_0 is not a Drinfeld module map".into()));
    }
    let field = a.field();
    let ring = PolyRing(field.clone());
    let phi_t = carlitz_t(field);
    let mut acc = TwistedPoly::zero(&ring);
    for &c in a.coeffs().iter().rev() {
        acc = acc
            .twisted_mul(&phi_t)?
            .checked_add(&TwistedPoly::constant(&ring, FqPoly::constant(field, c)))?;
    }
    Ok(CarlitzPhi {
        a: a.clone(),
        phi: acc,
    })
}

#[derive(Clone, Debug)]
pub struct IdealAction {
    pub phi: CarlitzPhi,
    /// `φ_a φ_b = φ_b φ_a` for every sampled `b`.
    pub commutes: bool,
    pub samples: usize,
    /// The ideal acts trivially on the single sgn-normalized module.
    pub trivial_action: bool,
    pub pic_plus_order: u64,
}

/// Action of the principal ideal `(a)`, `a` monic, checked against every
/// monic `b` of degree `≤ bdeg`.
pub fn ideal_action_principal(a: &FqPoly, bdeg: usize) -> Result<IdealAction> {
    if !a.is_monic() {
        return Err(Error::NonMonic(a.to_string()));
    }
    let phi = carlitz_phi(a)?;
    let mut commutes = true;
    let mut samples = 0;
    for d in 0..=bdeg {
        for b in FqPoly::monics(a.field(), d) {
            let pb = carlitz_phi(&b)?.phi;
            samples += 1;
            commutes &= phi.phi.twisted_mul(&pb)? == pb.twisted_mul(&phi.phi)?;
        }
    }
    let h = crate::divisors::pic_plus_order(a.field());
    Ok(IdealAction {
        phi,
        commutes,
        samples,
        trivial_action: commutes && h == 1,
        pic_plus_order: h,
    })
}

/// `φ_p ≡ τ^(deg p) mod p`.
pub fn phi_mod_p_check(p: &Prime) -> Result<bool> {
    let pf = p.poly().ok_or(Error::InfinitePrime)?;
    let phi = carlitz_phi(pf)?.phi;
    let d = pf.deg();
    Ok(phi.degree() == Some(d)
        && phi.coeff(d).is_one()
        && phi.coeffs()[..d].iter().all(|c| c.rem(pf).is_zero()))
}

/// Default bound on the extension degree searched for torsion.
pub const TORSION_SEARCH_BOUND: u32 = 16;

/// `φ[m]` over `F_{q^(deg p·s)}`, the residue field at `p` extended until
/// every root of `φ_m` is rational.
#[derive(Clone, Debug)]
pub struct TorsionSet {
    pub m: FqPoly,
    pub p: FqPoly,
    /// `E = F_q[X]/(g)` with `deg g = deg p · s`.
    pub field: ExtField,
    pub s: u32,
    /// Image of `T` in `E`: a root of `p`.
    pub theta: FqPoly,
    pub points: Vec<FqPoly>,
    pub generator: FqPoly,
}

impl TorsionSet {
    /// `a mod p` as an element of `E`.
    pub fn reduce(&self, a: &FqPoly) -> FqPoly {
        self.field.eval(a, &self.theta)
    }

    pub fn reduce_phi(&self, phi: &TwistedPoly<PolyRing>) -> TwistedPoly<ExtField> {
        phi.map(&self.field, |c| self.reduce(c))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `a ↦ φ_a(λ)` is a bijection from `A/m` onto the torsion points.
    pub fn module_iso_check(&self) -> Result<bool> {
        let field = self.m.field();
        let mut seen = std::collections::BTreeSet::new();
        for a in FqPoly::residues(field, self.m.deg()) {
            let img = if a.is_zero() {
                self.field.zero()
            } else {
                self.reduce_phi(&carlitz_phi(&a)?.phi).apply(&self.generator)
            };
            if !self.points.contains(&img) {
                return Ok(false);
            }
            seen.insert(img.coeffs().to_vec());
        }
        Ok(seen.len() == self.points.len())
    }
}

/// Roots of `φ_m` mod `p`, searching `s = 1, 2, …, bound`.
pub fn torsion_points(m: &FqPoly, p: &Prime, bound: u32) -> Result<TorsionSet> {
    let pf = p.poly().ok_or(Error::InfinitePrime)?;
    if m.is_zero() || m.is_constant() {
        return Err(Error::InvalidArgument("m must have degree ≥ 1".into()));
    }
    if pf.divides(m) {
        return Err(Error::Ramified(format!("{p} divides {m}")));
    }
    let field = m.field();
    let d = pf.deg();
    let dm = m.deg();
    let phi_m = carlitz_phi(&m.monic())?.phi;
    for s in 1..=bound {
        let e = ExtField::of_degree(field, d * s as usize)?;
        let theta = residue_root(&e, pf)?;
        let reduced = phi_m.map(&e, |c| e.eval(c, &theta));
        let images: Vec<FqPoly> = (0..e.degree())
            .map(|j| reduced.apply(&FqPoly::monomial(field, 1, j)))
            .collect();
        let basis = e.linear_kernel(&images);
        if basis.len() < dm {
            continue;
        }
        let mut points = e.span(&basis);
        points.sort();
        let (_, factors) = factor(&m.monic())?;
        let cofactors: Vec<TwistedPoly<ExtField>> = factors
            .iter()
            .map(|(l, _)| {
                let c = m.monic().div_rem(l).0;
                Ok(carlitz_phi(&c)?.phi.map(&e, |x| e.eval(x, &theta)))
            })
            .collect::<Result<_>>()?;
        let generator = points
            .iter()
            .find(|z| cofactors.iter().all(|c| !c.apply(z).is_zero()))
            .cloned()
            .ok_or_else(|| Error::TorsionNotFound {
                modulus: m.to_string(),
                prime: p.to_string(),
                bound,
            })?;
        return Ok(TorsionSet {
            m: m.clone(),
            p: pf.clone(),
            field: e,
            s,
            theta,
            points,
            generator,
        });
    }
    Err(Error::TorsionNotFound {
        modulus: m.to_string(),
        prime: p.to_string(),
        bound,
    })
}

/// A root of the irreducible `p` inside `E ⊇ F_{q^(deg p)}`, found by
/// enumerating the subfield fixed by `z ↦ z^(q^(deg p))`.
fn residue_root(e: &ExtField, p: &FqPoly) -> Result<FqPoly> {
    let field = e.base();
    let qd = (field.q() as u128).pow(p.deg() as u32);
    let images: Vec<FqPoly> = (0..e.degree())
        .map(|j| {
            let x = FqPoly::monomial(field, 1, j);
            &e.pow(&x, qd) - &x
        })
        .collect();
    let sub = e.linear_kernel(&images);
    e.span(&sub)
        .into_iter()
        .find(|z| e.eval(p, z).is_zero())
        .ok_or_else(|| Error::InvalidArgument(format!("{p} has no root in F_q^{}", e.degree())))
}

/// `z^(q^(deg p)) = φ_p(z)` mod `p` on every torsion point.
pub fn frobenius_action_check(t: &TorsionSet) -> Result<bool> {
    let qd = (t.field.base().q() as u128).pow(t.p.deg() as u32);
    let phi_p = t.reduce_phi(&carlitz_phi(&t.p)?.phi);
    Ok(t.points
        .iter()
        .all(|z| t.field.pow(z, qd) == phi_p.apply(z)))
}

/// `f/g` in `F_q(T)`, `g` monic.
#[derive(Clone, Debug)]
pub struct RatFunc {
    pub num: FqPoly,
    pub den: FqPoly,
}

impl RatFunc {
    pub fn new(num: FqPoly, den: FqPoly) -> Self {
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_zero() || g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        if n.is_zero() {
            d = FqPoly::one(d.field());
        }
        let lc = d.leading();
        let inv = d.field().inv(lc).expect("nonzero denominator");
        n = n.scale(inv);
        d = d.scale(inv);
        RatFunc { num: n, den: d }
    }

    pub fn poly(a: FqPoly) -> Self {
        let one = FqPoly::one(a.field());
        RatFunc { num: a, den: one }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn frob(&self) -> RatFunc {
        let q = self.num.field().q() as usize;
        RatFunc::new(self.num.inflate(q), self.den.inflate(q))
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Largest `N` for the truncated exponential.
pub const MAX_EXP_TERMS: u32 = 3;

#[derive(Clone, Debug, Serialize)]
pub struct ExpTerm {
    pub i: u32,
    pub exponent: u64,
    pub coefficient: String,
    pub d_i: String,
}

#[derive(Clone, Debug)]
pub struct CarlitzExp {
    /// `D_0, …, D_N`.
    pub d: Vec<FqPoly>,
    /// Coefficient of `z^(q^i)`.
    pub coeffs: Vec<RatFunc>,
    /// `e(Tz) = T e(z) + e(z)^q` through the `z^(q^N)` term.
    pub functional_equation: bool,
}

impl CarlitzExp {
    pub fn terms(&self) -> Vec<ExpTerm> {
        let q = self.d[0].field().q() as u64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| ExpTerm {
                i: i as u32,
                exponent: q.pow(i as u32),
                coefficient: c.to_string(),
                d_i: self.d[i].to_string(),
            })
            .collect()
    }
}

/// `e(z) = Σ_{i ≤ N} z^(q^i)/D_i` with `D_i = (T^(q^i) − T)·D_{i−1}^q`.
pub fn carlitz_exp_truncated(field: &Field, n: u32) -> Result<CarlitzExp> {
    if n > MAX_EXP_TERMS {
        return Err(Error::TooLarge {
            what: "Carlitz exponential terms",
            size: n as u128,
            limit: MAX_EXP_TERMS as u128,
        });
    }
    let q = field.q() as usize;
    let t = FqPoly::t(field);
    let mut d = vec![FqPoly::one(field)];
    for i in 1..=n as usize {
        let tq = FqPoly::monomial(field, 1, q.pow(i as u32));
        let prev = d[i - 1].inflate(q);
        d.push(&(&tq - &t) * &prev);
    }
    let coeffs: Vec<RatFunc> = d
        .iter()
        .map(|di| RatFunc::new(FqPoly::one(field), di.clone()))
        .collect();
    // coefficient of z^(q^i): T^(q^i)·c_i on the left, T·c_i + c_(i−1)^q on the right
    let tr = RatFunc::poly(t);
    let mut ok = true;
    for i in 0..=n as usize {
        let lhs = RatFunc::poly(FqPoly::monomial(field, 1, q.pow(i as u32))).mul(&coeffs[i]);
        let mut rhs = tr.mul(&coeffs[i]);
        if i > 0 {
            rhs = rhs.add(&coeffs[i - 1].frob());
        }
        ok &= lhs == rhs;
    }
    Ok(CarlitzExp {
        d,
        coeffs,
        functional_equation: ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Field {
        Field::prime(q).unwrap()
    }

    fn poly(q: u32, s: &str) -> FqPoly {
        FqPoly::parse(&f(q), s).unwrap()
    }

    #[test]
    fn twisted_products() {
        let f2 = f(2);
        let ring = PolyRing(f2.clone());
        let tau = TwistedPoly::tau_pow(&ring, 1);
        let t = TwistedPoly::constant(&ring, FqPoly::t(&f2));
        assert_eq!(tau.twisted_mul(&t).unwrap().to_string(), "T^2*t");
        let phi = carlitz_t(&f2);
        assert_eq!(
            phi.twisted_mul(&phi).unwrap().to_string(),
            "T^2 + (T^2+T)*t + t^2"
        );
        let one = TwistedPoly::one(&ring);
        assert_eq!(phi.twisted_mul(&one).unwrap(), phi);
        let other = TwistedPoly::one(&PolyRing(f(3)));
        assert!(matches!(phi.twisted_mul(&other), Err(Error::RingMismatch)));
    }

    #[test]
    fn phi_examples() {
        for q in [2, 3] {
            let fq = f(q);
            let p2 = carlitz_phi(&poly(q, "T^2")).unwrap();
            let expect = format!("T^2 + (T^{q}+T)*t + t^2");
            assert_eq!(p2.phi.to_string(), expect);
            assert!(p2.satisfies_invariants());
            let c = carlitz_phi(&FqPoly::constant(&fq, q - 1)).unwrap();
            assert_eq!(c.phi.degree(), Some(0));
        }
        assert!(carlitz_phi(&FqPoly::zero(&f(2))).is_err());
    }

    #[test]
    fn parse_roundtrip() {
        let f3 = f(3);
        let phi = carlitz_phi(&poly(3, "2*T^2+T+1")).unwrap().phi;
        let back = TwistedPoly::parse(&f3, &phi.to_string()).unwrap();
        assert_eq!(back, phi);
        let x = TwistedPoly::parse(&f3, "T - t + 2*T*τ^2").unwrap();
        assert_eq!(x.to_string(), "T + 2*t + 2*T*t^2");
        for bad in ["", "t^", "(T", "T)", "T*", "*t", "T t"] {
            assert!(TwistedPoly::parse(&f3, bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn mod_p_examples() {
        let f2 = f(2);
        assert!(phi_mod_p_check(&Prime::parse(&f2, "T").unwrap()).unwrap());
        let p = Prime::parse(&f2, "T^2+T+1").unwrap();
        let phi = carlitz_phi(p.poly().unwrap()).unwrap().phi;
        assert_eq!(phi.to_string(), "(T^2+T+1) + (T^2+T+1)*t + t^2");
        assert!(phi_mod_p_check(&p).unwrap());
    }

    #[test]
    fn ideal_action() {
        let r = ideal_action_principal(&poly(2, "T"), 2).unwrap();
        assert!(r.commutes && r.trivial_action && r.pic_plus_order == 1);
        assert!(matches!(
            ideal_action_principal(&poly(3, "2*T"), 1),
            Err(Error::NonMonic(_))
        ));
    }

    #[test]
    fn torsion_examples() {
        let f2 = f(2);
        let t = torsion_points(&poly(2, "T"), &Prime::parse(&f2, "T+1").unwrap(), 8).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.generator, FqPoly::one(&f2));
        assert!(frobenius_action_check(&t).unwrap());
        let t = torsion_points(&poly(2, "T^2+T+1"), &Prime::parse(&f2, "T").unwrap(), 8).unwrap();
        assert_eq!(t.len(), 4);
        assert!(t.module_iso_check().unwrap());
        assert!(frobenius_action_check(&t).unwrap());
        assert!(matches!(
            torsion_points(&poly(2, "T^2"), &Prime::parse(&f2, "T").unwrap(), 4),
            Err(Error::Ramified(_))
        ));
    }

    #[test]
    fn exponential() {
        let e = carlitz_exp_truncated(&f(2), 2).unwrap();
        assert_eq!(e.d[1].to_string(), "T^2+T");
        assert!(e.functional_equation);
        assert!(e.coeffs[0] == RatFunc::poly(FqPoly::one(&f(2))));
        assert!(carlitz_exp_truncated(&f(2), 4).is_err());
    }
}
