//! Tail-equivalence product spaces, Radon–Nikodym exponents, and the
//! pairing construction that certifies `x^n` as an essential value.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::beta::Beta;
use crate::divisors::{artin_kernel_degree_check, ConstDegree, Divisor, ExtensionSpec, Prime};
use crate::error::{Error, Result};
use crate::ffpoly::{prime_table, PrimeCache};
use crate::mass::FormalMass;

pub const DEFAULT_KMAX: u32 = 4;
pub const DEFAULT_THETA: f64 = 2.0;

/// Local space at one prime: `v_p ∈ {0, …, kmax}` plus a capped remainder.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub prime: Prime,
    pub masses: Vec<FormalMass>,
    pub remainder: FormalMass,
}

impl Component {
    pub fn new(prime: Prime, kmax: u32) -> Self {
        let d = prime.degree() as usize;
        let masses = (0..=kmax as usize)
            .map(|k| &FormalMass::x_pow(k * d) - &FormalMass::x_pow((k + 1) * d))
            .collect();
        Component {
            remainder: FormalMass::x_pow((kmax as usize + 1) * d),
            prime,
            masses,
        }
    }

    pub fn degree(&self) -> u32 {
        self.prime.degree()
    }

    /// Masses plus remainder sum to 1.
    pub fn is_normalized(&self) -> bool {
        let total = self
            .masses
            .iter()
            .fold(self.remainder.clone(), |acc, m| &acc + m);
        total == FormalMass::one()
    }
}

/// A finite probability space carrying the identity relation.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteFactor {
    pub weights: Vec<BigRational>,
}

impl FiniteFactor {
    pub fn new(weights: Vec<BigRational>) -> Result<Self> {
        let total: BigRational = weights.iter().sum();
        if weights.is_empty() || !total.is_one() || weights.iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidArgument(
                "factor weights must be nonnegative and sum to 1".into(),
            ));
        }
        Ok(FiniteFactor { weights })
    }

    pub fn uniform(k: usize) -> Self {
        FiniteFactor {
            weights: vec![BigRational::new(1.into(), (k as i64).into()); k],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailSpace {
    pub components: Vec<Component>,
    pub factors: Vec<FiniteFactor>,
    pub dmax: u32,
    pub kmax: u32,
    index: BTreeMap<Prime, usize>,
}

impl TailSpace {
    /// Components are the primes of degree `≤ dmax` outside `S`, all of them
    /// or only the completely split ones.
    pub fn new(
        ext: &ExtensionSpec,
        excluded: &BTreeSet<Prime>,
        dmax: u32,
        kmax: u32,
        split_only: bool,
        cache: Option<&PrimeCache>,
    ) -> Result<Self> {
        let mut primes = Vec::new();
        for d in 1..=dmax {
            if split_only {
                match ext.n() {
                    ConstDegree::Finite(n) if d % n == 0 => {}
                    _ => continue,
                }
            }
            for p in prime_table(ext.field(), d, cache)?.iter() {
                if split_only && !ext.is_split(&p) {
                    continue;
                }
                let p = Prime::Finite(p);
                if !ext.is_ramified(&p) && !excluded.contains(&p) {
                    primes.push(p);
                }
            }
        }
        Ok(TailSpace::from_primes(primes, dmax, kmax))
    }

    pub fn from_primes(mut primes: Vec<Prime>, dmax: u32, kmax: u32) -> Self {
        primes.sort();
        primes.dedup();
        let components: Vec<Component> =
            primes.into_iter().map(|p| Component::new(p, kmax)).collect();
        let index = components
            .iter()
            .enumerate()
            .map(|(i, c)| (c.prime.clone(), i))
            .collect();
        TailSpace {
            components,
            factors: Vec::new(),
            dmax,
            kmax,
            index,
        }
    }

    pub fn augment(&self, factor: FiniteFactor) -> Self {
        let mut s = self.clone();
        s.factors.push(factor);
        s
    }

    pub fn component(&self, p: &Prime) -> Option<&Component> {
        self.index.get(p).map(|&i| &self.components[i])
    }

    /// Primes of a given degree, in canonical order.
    pub fn primes_of_degree(&self, d: u32) -> Vec<&Prime> {
        self.components
            .iter()
            .map(|c| &c.prime)
            .filter(|p| p.degree() == d)
            .collect()
    }

    /// gcd of the degrees of all components.
    pub fn degree_gcd(&self) -> u64 {
        self.components
            .iter()
            .fold(0u64, |g, c| g.gcd(&(c.degree() as u64)))
    }
}

/// A partial point map changing finitely many valuations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TailTransform {
    pub moves: BTreeMap<Prime, (u32, u32)>,
}

impl TailTransform {
    pub fn identity() -> Self {
        TailTransform::default()
    }

    pub fn with(mut self, p: Prime, from: u32, to: u32) -> Self {
        self.moves.insert(p, (from, to));
        self
    }

    /// The divisor `Σ (to − from)·p` by which the transform moves points.
    pub fn divisor(&self, field: &crate::ffpoly::Field) -> Divisor {
        let mut d = Divisor::zero(field);
        for (p, &(a, b)) in &self.moves {
            d.add_prime(p.clone(), b as i64 - a as i64);
        }
        d
    }
}

/// Exponent `e` with `c_μ(x, Tx) = x^e`.
pub fn rn_cocycle(space: &TailSpace, t: &TailTransform) -> Result<i64> {
    let mut e = 0i64;
    for (p, &(from, to)) in &t.moves {
        let c = space
            .component(p)
            .ok_or_else(|| Error::InvalidArgument(format!("{p} is not a component")))?;
        for v in [from, to] {
            if v > space.kmax {
                return Err(Error::CappedValuation {
                    valuation: v,
                    cap: space.kmax,
                });
            }
        }
        e += c.degree() as i64 * (to as i64 - from as i64);
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Block {
    pub level: u32,
    pub p: String,
    pub p_prime: String,
    pub ratio_exponent: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    pub k: u32,
    pub block_count: usize,
    /// `Σ_j μ(Z(K_j))` over the blocks of this level.
    pub increment: FormalMass,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairingScheme {
    pub step: u32,
    pub blocks: Vec<Block>,
    pub levels: Vec<Level>,
    /// Levels dropped because degree `2k·step` had more primes than `(2k+1)·step`.
    pub skipped: Vec<u32>,
    pub divergence_sum: FormalMass,
}

impl PairingScheme {
    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Pair primes of degree `2k·step` with distinct primes of degree
    /// `(2k+1)·step`, for every level that fits below the truncation.
    pub fn from_space(space: &TailSpace, step: u32) -> Self {
        let mut blocks = Vec::new();
        let mut levels = Vec::new();
        let mut skipped = Vec::new();
        let mut sum = FormalMass::zero();
        if step > 0 {
            let mut k = 1;
            while (2 * k + 1) * step <= space.dmax {
                let (d, d2) = (2 * k * step, (2 * k + 1) * step);
                let ps = space.primes_of_degree(d);
                let ps2 = space.primes_of_degree(d2);
                if ps.len() > ps2.len() {
                    log::warn!(
                        "level {k}: {} primes of degree {d} but {} of degree {d2}; skipped",
                        ps.len(),
                        ps2.len()
                    );
                    skipped.push(k);
                } else if !ps.is_empty() {
                    // K_j = {v_p = 1, v_p' = 0}
                    let mk = &(&FormalMass::x_pow(d as usize) - &FormalMass::x_pow(2 * d as usize))
                        * &(&FormalMass::one() - &FormalMass::x_pow(d2 as usize));
                    for (p, p2) in ps.iter().zip(&ps2) {
                        let t = TailTransform::identity()
                            .with((*p).clone(), 1, 0)
                            .with((*p2).clone(), 0, 1);
                        blocks.push(Block {
                            level: k,
                            p: p.to_string(),
                            p_prime: p2.to_string(),
                            ratio_exponent: rn_cocycle(space, &t).expect("components"),
                        });
                    }
                    let inc = mk.scale(&BigRational::from_integer(ps.len().into()));
                    sum = &sum + &inc;
                    levels.push(Level {
                        k,
                        block_count: ps.len(),
                        increment: inc,
                    });
                }
                k += 1;
            }
        }
        PairingScheme {
            step,
            blocks,
            levels,
            skipped,
            divergence_sum: sum,
        }
    }
}

/// Pairing over the split primes of `ext` outside `S`.
pub fn build_pairing(
    ext: &ExtensionSpec,
    excluded: &BTreeSet<Prime>,
    dmax: u32,
    cache: Option<&PrimeCache>,
) -> Result<PairingScheme> {
    let n = ext.n_finite()?;
    let space = TailSpace::new(ext, excluded, dmax, DEFAULT_KMAX, true, cache)?;
    Ok(PairingScheme::from_space(&space, n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Divergence {
    Diverges,
    Converges,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnosticRow {
    pub k: u32,
    pub block_count: usize,
    pub increment: f64,
    pub partial_sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    pub verdict: Divergence,
    pub rows: Vec<DiagnosticRow>,
    pub partial_sum: f64,
    pub threshold: f64,
    /// `min_k k·increment_k` when the increments do not decay.
    pub harmonic_constant: Option<f64>,
    /// Rigorous bound on the whole series, present when `qx < 1`.
    pub upper_bound: Option<f64>,
    /// DIVERGES is a calibrated heuristic, never a proof.
    pub heuristic: bool,
}

/// Over the second half of the levels `k·increment_k` stays above half its
/// maximum over the first half: the `c/k` signature of a divergent series.
fn harmonic_signature(rows: &[DiagnosticRow]) -> Option<f64> {
    if rows.len() < 2 {
        return None;
    }
    let s: Vec<f64> = rows.iter().map(|r| r.k as f64 * r.increment).collect();
    let (head, tail) = s.split_at(s.len() / 2);
    let max_head = head.iter().cloned().fold(0.0, f64::max);
    let min_tail = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    (max_head > 0.0 && min_tail >= 0.5 * max_head)
        .then(|| s.iter().cloned().fold(f64::INFINITY, f64::min))
}

pub fn divergence_diagnostic(scheme: &PairingScheme, q: u32, beta: &Beta, theta: f64) -> Diagnostic {
    let x = beta.x_f64(q);
    let mut partial = 0.0;
    let rows: Vec<DiagnosticRow> = scheme
        .levels
        .iter()
        .map(|l| {
            let inc = l.increment.eval_f64(x);
            partial += inc;
            DiagnosticRow {
                k: l.k,
                block_count: l.block_count,
                increment: inc,
                partial_sum: partial,
            }
        })
        .collect();
    let harmonic = harmonic_signature(&rows);
    let qx = q as f64 * x;
    let mut upper = None;
    let verdict = if scheme.is_empty() {
        Divergence::Inconclusive
    } else if qx < 1.0 {
        // m_d ≤ q^d/d ≤ q^d, so level k contributes at most (qx)^(2k·step)
        let last = scheme.levels.last().map_or(0, |l| l.k);
        let r = qx.powi(2 * scheme.step as i32);
        upper = Some(partial + r.powi(last as i32 + 1) / (1.0 - r));
        Divergence::Converges
    } else if partial > theta && harmonic.is_some() {
        Divergence::Diverges
    } else {
        Divergence::Inconclusive
    };
    Diagnostic {
        heuristic: verdict == Divergence::Diverges,
        verdict,
        rows,
        partial_sum: partial,
        threshold: theta,
        harmonic_constant: harmonic,
        upper_bound: upper,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowReport {
    pub base: String,
    pub speed: f64,
    pub period_on_finite_quotient: Option<f64>,
    pub n: Option<u32>,
}

/// Flow of weights `F_t(s, a) = (s + t/(β log q), a)` on `(ℝ × Ẑ)/ℤ`.
pub fn flow_report(beta: &Beta, q: u32, n: Option<u32>) -> Result<FlowReport> {
    if beta.is_negative() {
        return Err(Error::NegativeBeta);
    }
    if beta.is_zero() || *beta == Beta::Infinity {
        return Err(Error::BetaOutOfRange(format!(
            "flow speed 1/(β log q) is undefined at β = {beta}"
        )));
    }
    let bl = beta.to_f64() * (q as f64).ln();
    Ok(FlowReport {
        base: "(R x Zhat)/Z".into(),
        speed: 1.0 / bl,
        period_on_finite_quotient: n.map(|n| n as f64 * bl),
        n,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBound {
    Diverges,
    HarmonicSignature,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TypeKind {
    IiiLambda { exponent: u64, lambda: f64 },
    Iii0,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypeVerdict {
    #[serde(flatten)]
    pub kind: TypeKind,
    pub lattice_gcd: Option<u64>,
    pub kernel_degree_check: Option<bool>,
    pub kernel_checked: Option<usize>,
    pub lower_bound: Option<LowerBound>,
    pub block_exponents: Vec<i64>,
    pub skipped_levels: Vec<u32>,
    pub diagnostic: Option<Diagnostic>,
    pub flow: Option<FlowReport>,
}

fn check_beta(beta: &Beta) -> Result<()> {
    if beta.is_negative() {
        return Err(Error::NegativeBeta);
    }
    if beta.is_zero() || beta.cmp_f64(1.0) == std::cmp::Ordering::Greater {
        return Err(Error::BetaOutOfRange(format!(
            "type detection needs 0 < β ≤ 1, got {beta}"
        )));
    }
    Ok(())
}

/// Type of the tail relation on a space whose components all lie in the
/// Artin kernel: the cocycle lattice is generated by the component degrees,
/// and the pairing at that step supplies the lower bound.
pub fn classify_space(space: &TailSpace, q: u32, beta: &Beta) -> Result<TypeVerdict> {
    check_beta(beta)?;
    let g = space.degree_gcd();
    let scheme = PairingScheme::from_space(space, g as u32);
    let diag = divergence_diagnostic(&scheme, q, beta, DEFAULT_THETA);
    let qx = q as f64 * beta.x_f64(q);
    let lower = match diag.verdict {
        Divergence::Diverges => Some(LowerBound::Diverges),
        _ if qx >= 1.0 && diag.harmonic_constant.is_some() => Some(LowerBound::HarmonicSignature),
        _ => None,
    };
    let exps: BTreeSet<i64> = scheme.blocks.iter().map(|b| b.ratio_exponent).collect();
    let kind = match lower {
        Some(_) if exps.len() == 1 && exps.contains(&(g as i64)) => TypeKind::IiiLambda {
            exponent: g,
            lambda: (q as f64).powf(-beta.to_f64() * g as f64),
        },
        _ => TypeKind::Inconclusive,
    };
    Ok(TypeVerdict {
        kind,
        lattice_gcd: Some(g),
        kernel_degree_check: None,
        kernel_checked: None,
        lower_bound: lower,
        block_exponents: exps.into_iter().collect(),
        skipped_levels: scheme.skipped.clone(),
        diagnostic: Some(diag),
        flow: None,
    })
}

/// Depth of the exhaustive kernel-lattice check.
pub const KERNEL_CHECK_DEGREE: u32 = 8;

pub fn detect_type(
    ext: &ExtensionSpec,
    excluded: &BTreeSet<Prime>,
    beta: &Beta,
    dmax: u32,
    cache: Option<&PrimeCache>,
) -> Result<TypeVerdict> {
    check_beta(beta)?;
    let q = ext.field().q();
    let n = match ext.n() {
        ConstDegree::Infinite => {
            return Ok(TypeVerdict {
                kind: TypeKind::Iii0,
                lattice_gcd: None,
                kernel_degree_check: None,
                kernel_checked: None,
                lower_bound: None,
                block_exponents: Vec::new(),
                skipped_levels: Vec::new(),
                diagnostic: None,
                flow: Some(flow_report(beta, q, None)?),
            })
        }
        ConstDegree::Finite(n) => n,
    };
    let kc = artin_kernel_degree_check(ext, dmax.min(KERNEL_CHECK_DEGREE))?;
    let space = TailSpace::new(ext, excluded, dmax, DEFAULT_KMAX, true, cache)?;
    let mut v = classify_space(&space, q, beta)?;
    v.kernel_degree_check = Some(kc.holds);
    v.kernel_checked = Some(kc.checked);
    if !kc.holds {
        v.kind = TypeKind::Inconclusive;
    }
    if let TypeKind::IiiLambda { exponent, .. } = v.kind {
        debug_assert_eq!(exponent % n as u64, 0);
    }
    v.flow = Some(flow_report(beta, q, Some(n))?);
    Ok(v)
}

/// The exponent found by `classify_space` is unchanged by a trivial factor.
pub fn product_invariance_check(
    space: &TailSpace,
    factor: &FiniteFactor,
    q: u32,
    beta: &Beta,
) -> Result<bool> {
    let before = classify_space(space, q, beta)?;
    let after = classify_space(&space.augment(factor.clone()), q, beta)?;
    Ok(before.kind == after.kind && before.lattice_gcd == after.lattice_gcd)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelCocycleCheck {
    pub holds: bool,
    pub transforms: usize,
    pub in_kernel: usize,
    pub lattice_gcd: u64,
}

/// Every transform with valuations in `{0, 1}` on at most `max_support`
/// components (of all primes of degree `≤ dmax`) whose divisor lies in the
/// Artin kernel has cocycle exponent in `nℤ`.
pub fn kernel_cocycle_check(
    ext: &ExtensionSpec,
    dmax: u32,
    max_support: usize,
) -> Result<KernelCocycleCheck> {
    let n = ext.n_finite()? as i64;
    let space = TailSpace::new(ext, &BTreeSet::new(), dmax, 1, false, None)?;
    let classes: Vec<_> = space
        .components
        .iter()
        .map(|c| ext.artin_symbol(&c.prime))
        .collect::<Result<_>>()?;
    let inverses: Vec<_> = classes.iter().map(|c| ext.inverse(c)).collect();
    let id = ext.identity();
    let mut out = KernelCocycleCheck {
        holds: true,
        transforms: 0,
        in_kernel: 0,
        lattice_gcd: 0,
    };
    let len = space.components.len();
    let mut stack: Vec<(usize, i8)> = Vec::new();
    fn visit(
        start: usize,
        len: usize,
        max: usize,
        stack: &mut Vec<(usize, i8)>,
        f: &mut dyn FnMut(&[(usize, i8)]),
    ) {
        if !stack.is_empty() {
            f(stack);
        }
        if stack.len() == max {
            return;
        }
        for i in start..len {
            for s in [1i8, -1] {
                stack.push((i, s));
                visit(i + 1, len, max, stack, f);
                stack.pop();
            }
        }
    }
    let mut f = |moves: &[(usize, i8)]| {
        out.transforms += 1;
        let mut cls = id.clone();
        let mut e = 0i64;
        for &(i, s) in moves {
            let c = if s > 0 { &classes[i] } else { &inverses[i] };
            cls = ext.compose(&cls, c);
            e += s as i64 * space.components[i].degree() as i64;
        }
        if cls == id {
            out.in_kernel += 1;
            out.lattice_gcd = out.lattice_gcd.gcd(&e.unsigned_abs());
            if e % n != 0 {
                out.holds = false;
            }
        }
    };
    visit(0, len, max_support, &mut stack, &mut f);
    Ok(out)
}

/// Seeded sampling of random tail transforms on the kernel: gcd of the
/// observed cocycle exponents. A diagnostic only.
pub fn sample_cocycle_lattice(
    ext: &ExtensionSpec,
    space: &TailSpace,
    samples: usize,
    seed: u64,
) -> Result<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = 0u64;
    if space.components.is_empty() {
        return Ok(0);
    }
    for _ in 0..samples {
        let mut t = TailTransform::identity();
        for _ in 0..rng.gen_range(1..=3) {
            let c = &space.components[rng.gen_range(0..space.components.len())];
            let from = rng.gen_range(0..=space.kmax);
            let to = rng.gen_range(0..=space.kmax);
            t = t.with(c.prime.clone(), from, to);
        }
        let d = t.divisor(ext.field());
        if ext.artin_of_divisor(&d)? == ext.identity() {
            g = g.gcd(&rn_cocycle(space, &t)?.unsigned_abs());
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::Field;
    use std::f64::consts::LN_2;

    fn ext(q: u32, n: u32, m: &str) -> ExtensionSpec {
        ExtensionSpec::parse(&Field::prime(q).unwrap(), n, m).unwrap()
    }

    fn p(e: &ExtensionSpec, s: &str) -> Prime {
        Prime::parse(e.field(), s).unwrap()
    }

    #[test]
    fn cocycle_examples() {
        let e = ext(2, 1, "1");
        let space = TailSpace::new(&e, &BTreeSet::new(), 6, 4, false, None).unwrap();
        assert_eq!(rn_cocycle(&space, &TailTransform::identity()).unwrap(), 0);
        let t = TailTransform::identity().with(p(&e, "T^3+T+1"), 0, 1);
        assert_eq!(rn_cocycle(&space, &t).unwrap(), 3);
        let swap = TailTransform::identity()
            .with(p(&e, "T^4+T+1"), 1, 0)
            .with(p(&e, "T^6+T+1"), 0, 1);
        assert_eq!(rn_cocycle(&space, &swap).unwrap(), 2);
        let capped = TailTransform::identity().with(p(&e, "T"), 0, 5);
        assert!(matches!(rn_cocycle(&space, &capped), Err(Error::CappedValuation { .. })));
        assert!(space.components.iter().all(Component::is_normalized));
    }

    #[test]
    fn pairing_examples() {
        let none = BTreeSet::new();
        let s1 = build_pairing(&ext(2, 1, "1"), &none, 7, None).unwrap();
        assert_eq!(s1.blocks[0].ratio_exponent, 1);
        assert_eq!(s1.blocks[0].p, "T^2+T+1");
        let s2 = build_pairing(&ext(2, 2, "1"), &none, 10, None).unwrap();
        assert!(s2.blocks.iter().all(|b| b.ratio_exponent == 2));
        assert_eq!(s2.levels[0].k, 1);
        assert_eq!(s2.levels[0].block_count, 3);
        let empty = build_pairing(&ext(2, 2, "1"), &none, 5, None).unwrap();
        assert!(empty.is_empty());
        let d = divergence_diagnostic(&empty, 2, &Beta::integer(1), DEFAULT_THETA);
        assert_eq!(d.verdict, Divergence::Inconclusive);
    }

    #[test]
    fn diagnostic_regimes() {
        let s = build_pairing(&ext(2, 1, "1"), &BTreeSet::new(), 16, None).unwrap();
        let half = divergence_diagnostic(&s, 2, &Beta::ratio(1, 2), DEFAULT_THETA);
        assert_eq!(half.verdict, Divergence::Diverges, "{half:?}");
        let two = divergence_diagnostic(&s, 2, &Beta::integer(2), DEFAULT_THETA);
        assert_eq!(two.verdict, Divergence::Converges);
        assert!(two.upper_bound.unwrap() < 0.5);
    }

    #[test]
    fn types() {
        let none = BTreeSet::new();
        for (n, m, beta) in [(1, "1", Beta::integer(1)), (2, "1", Beta::integer(1)), (3, "T", Beta::ratio(1, 2))] {
            let v = detect_type(&ext(2, n, m), &none, &beta, 16, None).unwrap();
            match v.kind {
                TypeKind::IiiLambda { exponent, .. } => assert_eq!(exponent, n as u64),
                k => panic!("({n},{m}): {k:?}"),
            }
        }
        assert!(detect_type(&ext(2, 1, "1"), &none, &Beta::integer(2), 16, None).is_err());
        let inf = ExtensionSpec::new(
            &Field::prime(2).unwrap(),
            ConstDegree::Infinite,
            crate::ffpoly::FqPoly::one(&Field::prime(2).unwrap()),
        )
        .unwrap();
        let v = detect_type(&inf, &none, &Beta::integer(1), 16, None).unwrap();
        assert_eq!(v.kind, TypeKind::Iii0);
    }

    #[test]
    fn flows() {
        let f = flow_report(&Beta::integer(1), 2, Some(2)).unwrap();
        assert!((f.speed - 1.0 / LN_2).abs() < 1e-15);
        assert!((f.period_on_finite_quotient.unwrap() - 2.0 * LN_2).abs() < 1e-15);
        assert!(flow_report(&Beta::integer(0), 2, None).is_err());
    }

    #[test]
    fn kernel_lattice_small() {
        let r = kernel_cocycle_check(&ext(2, 2, "T^2+T+1"), 5, 2).unwrap();
        assert!(r.holds && r.in_kernel > 0);
        assert_eq!(r.lattice_gcd % 2, 0);
    }

    #[test]
    fn sampled_lattice_is_n() {
        let e = ext(2, 2, "1");
        let space = TailSpace::new(&e, &BTreeSet::new(), 8, 4, false, None).unwrap();
        assert_eq!(sample_cocycle_lattice(&e, &space, 500, 7).unwrap(), 2);
    }
}
