//! Partition functions, Euler products and the L-product behind uniqueness
//! of KMS states for `0 < β ≤ 1`.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::beta::Beta;
use crate::divisors::{ExtensionSpec, GaloisClass, Prime};
use crate::error::{Error, Result};
use crate::ffpoly::{prime_table, Field, PrimeCache};
use crate::mass::{rat_to_string, FormalMass};

/// A number with its provenance: exact rational when available, always a
/// float, and the bound on what truncation left out.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub exact: Option<BigRational>,
    pub tail_bound: f64,
}

impl Evaluation {
    pub fn exact(r: BigRational) -> Self {
        Evaluation {
            value: r.to_f64().unwrap_or(f64::NAN),
            exact: Some(r),
            tail_bound: 0.0,
        }
    }

    pub fn approx(value: f64, tail_bound: f64) -> Self {
        Evaluation {
            value,
            exact: None,
            tail_bound,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "value": match &self.exact {
                Some(r) => serde_json::Value::String(rat_to_string(r)),
                None => serde_json::json!(self.value),
            },
            "value_f64": self.value,
            "tail_bound": self.tail_bound,
            "exact": self.exact.is_some(),
        })
    }
}

/// Number of primes of each degree `1..=dmax` avoiding `excluded`.
pub fn prime_counts(
    field: &Field,
    excluded: &BTreeSet<Prime>,
    dmax: u32,
    cache: Option<&PrimeCache>,
) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; dmax as usize + 1];
    for d in 1..=dmax {
        counts[d as usize] = prime_table(field, d, cache)?.len() as u64;
    }
    for p in excluded {
        if let Prime::Finite(f) = p {
            let d = f.deg();
            if d <= dmax as usize {
                counts[d] -= 1;
            }
        }
    }
    Ok(counts)
}

/// `∏_{p ∉ S, deg p ≤ dmax} (1 − x^(deg p))^(−1)` modulo `x^(dmax+1)`, i.e.
/// the exact sum of `x^(deg D)` over effective `D` of degree `≤ dmax`
/// supported away from `S`. `S` always contains ∞; `excluded` lists the
/// finite primes of `S`.
pub fn zeta_partial(
    field: &Field,
    excluded: &BTreeSet<Prime>,
    dmax: u32,
    cache: Option<&PrimeCache>,
) -> Result<FormalMass> {
    let counts = prime_counts(field, excluded, dmax, cache)?;
    Ok(euler_product(&counts, dmax))
}

fn euler_product(counts: &[u64], dmax: u32) -> FormalMass {
    let order = dmax as usize + 1;
    let mut acc = FormalMass::one().truncate(order);
    for (d, &n) in counts.iter().enumerate().skip(1) {
        if n > 0 {
            acc = &acc * &FormalMass::geometric_pow(d, n, order);
        }
    }
    // every term of degree ≤ dmax is final: this is the exact partial sum
    FormalMass::from_coeffs(acc.coeffs().to_vec(), None)
}

/// Partial partition function at β together with the geometric tail bound
/// `(qx)^(dmax+1)/(1 − qx)`, valid for `S = {∞}` and `β > 1`.
pub fn zeta_partial_eval(
    field: &Field,
    excluded: &BTreeSet<Prime>,
    dmax: u32,
    beta: &Beta,
    cache: Option<&PrimeCache>,
) -> Result<(FormalMass, Evaluation)> {
    let z = zeta_partial(field, excluded, dmax, cache)?;
    let q = field.q();
    let qx = q as f64 * beta.x_f64(q);
    let tail = if qx < 1.0 {
        qx.powi(dmax as i32 + 1) / (1.0 - qx)
    } else {
        f64::INFINITY
    };
    let ev = match beta.x_exact(q) {
        Some(x) => Evaluation {
            exact: Some(z.eval_exact(&x)?),
            value: z.eval_exact(&x)?.to_f64().unwrap_or(f64::NAN),
            tail_bound: tail,
        },
        None => Evaluation::approx(z.eval_f64(beta.x_f64(q)), tail),
    };
    Ok((z, ev))
}

/// `ζ_K(β) = 1/(1 − q^(1−β))` for `S = {∞}`.
pub fn zeta_closed_form(q: u32, beta: &Beta) -> Result<Evaluation> {
    if beta.cmp_f64(1.0) != std::cmp::Ordering::Greater {
        return Err(Error::BetaOutOfRange(format!(
            "the partition function diverges for β = {beta} ≤ 1"
        )));
    }
    if *beta == Beta::Infinity {
        return Ok(Evaluation::exact(BigRational::one()));
    }
    match beta.x_exact(q) {
        Some(x) => {
            let qx = x * BigRational::from_integer(q.into());
            Ok(Evaluation::exact(BigRational::one() / (BigRational::one() - qx)))
        }
        None => Ok(Evaluation::approx(
            1.0 / (1.0 - (q as f64).powf(1.0 - beta.to_f64())),
            0.0,
        )),
    }
}

/// Coefficients of the Euler product built from enumerated primes equal
/// the monic counts `q^d` for all `d ≤ dmax`.
pub fn euler_dirichlet_check(field: &Field, dmax: u32) -> Result<bool> {
    let z = zeta_partial(field, &BTreeSet::new(), dmax, None)?;
    let q = BigRational::from_integer(field.q().into());
    let mut qd = BigRational::one();
    for d in 0..=dmax as usize {
        if z.coeff(d) != qd {
            return Ok(false);
        }
        qd *= &q;
    }
    Ok(true)
}

/// A character of `ℤ/n × (A/m)*` with values in the `order`-th roots of
/// unity: `χ(a, u) = ζ^(const_exp·a + Σ unit_exps[i]·log_i u)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterSpec {
    pub order: u64,
    pub const_exp: u64,
    pub unit_exps: Vec<u64>,
}

impl CharacterSpec {
    pub fn trivial(ext: &ExtensionSpec) -> Self {
        CharacterSpec {
            order: 1,
            const_exp: 0,
            unit_exps: vec![0; ext.units().generators().len()],
        }
    }

    /// Checks that the exponents respect the generator orders.
    pub fn validate(&self, ext: &ExtensionSpec) -> Result<()> {
        let bad = |why: String| Err(Error::InvalidArgument(format!("character: {why}")));
        if self.order == 0 {
            return bad("order must be ≥ 1".into());
        }
        let n = ext.n_finite()? as u64;
        if (self.const_exp as u128 * n as u128) % self.order as u128 != 0 {
            return bad(format!("ζ^{} has order not dividing n = {n}", self.const_exp));
        }
        let gens = ext.units().generators();
        if self.unit_exps.len() != gens.len() {
            return bad(format!("expected {} unit exponents", gens.len()));
        }
        for ((_, o), &e) in gens.iter().zip(&self.unit_exps) {
            if (e as u128 * *o as u128) % self.order as u128 != 0 {
                return bad(format!("exponent {e} incompatible with generator order {o}"));
            }
        }
        Ok(())
    }

    /// Phase index `k` with `χ(class) = exp(2πik/order)`.
    pub fn phase(&self, ext: &ExtensionSpec, c: &GaloisClass) -> u64 {
        let logs = ext.units().discrete_log(&c.u).expect("unit class");
        let mut k = (self.const_exp % self.order) * (c.a % self.order) % self.order;
        for (&e, &l) in self.unit_exps.iter().zip(logs) {
            k = (k + (e % self.order) * (l % self.order)) % self.order;
        }
        k
    }

    pub fn is_trivial(&self, ext: &ExtensionSpec) -> bool {
        ext.classes()
            .map(|cs| cs.iter().all(|c| self.phase(ext, c) == 0))
            .unwrap_or(false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UniquenessProduct {
    pub trivial_character: bool,
    /// `(d, ∏_{deg p ≤ d} |(1 − N(p)^(−β))/(1 − χ(p)N(p)^(−β))|)`
    pub partial: Vec<(u32, f64)>,
}

impl UniquenessProduct {
    pub fn last(&self) -> f64 {
        self.partial.last().map_or(1.0, |p| p.1)
    }
}

/// Partial products of `|(1 − N(p)^(−β)) / (1 − χ(p) N(p)^(−β))|` over
/// unramified primes of degree `≤ dmax`.
pub fn kms_uniqueness_product(
    ext: &ExtensionSpec,
    chi: &CharacterSpec,
    beta: &Beta,
    dmax: u32,
) -> Result<UniquenessProduct> {
    if beta.is_negative() || beta.is_zero() || beta.cmp_f64(1.0) == std::cmp::Ordering::Greater {
        return Err(Error::BetaOutOfRange(format!("β = {beta} is not in (0, 1]")));
    }
    chi.validate(ext)?;
    if chi.is_trivial(ext) {
        return Ok(UniquenessProduct {
            trivial_character: true,
            partial: (1..=dmax).map(|d| (d, 1.0)).collect(),
        });
    }
    let q = ext.field().q();
    let b = beta.to_f64();
    let mut acc = 1.0f64;
    let mut partial = Vec::new();
    for d in 1..=dmax {
        let t = (q as f64).powf(-b * d as f64);
        for p in prime_table(ext.field(), d, None)?.iter() {
            if p.divides(ext.conductor()) {
                continue;
            }
            let c = ext.artin_symbol(&Prime::Finite(p))?;
            let theta = 2.0 * PI * chi.phase(ext, &c) as f64 / chi.order as f64;
            let denom = (1.0 - 2.0 * t * theta.cos() + t * t).sqrt();
            acc *= (1.0 - t) / denom;
        }
        partial.push((d, acc));
    }
    Ok(UniquenessProduct {
        trivial_character: false,
        partial,
    })
}
