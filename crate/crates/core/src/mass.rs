//! Exact polynomials and truncated power series in `x = q^(−β)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of `ℚ[x]`, or of `ℚ[[x]]/(x^order)` when `order` is set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalMass {
    coeffs: Vec<BigRational>,
    order: Option<usize>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rat(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl FormalMass {
    pub fn zero() -> Self {
        FormalMass {
            coeffs: Vec::new(),
            order: None,
        }
    }

    pub fn one() -> Self {
        FormalMass::monomial(BigRational::one(), 0)
    }

    pub fn constant(c: BigRational) -> Self {
        FormalMass::monomial(c, 0)
    }

    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        FormalMass::from_coeffs(coeffs, None)
    }

    /// `x^k`.
    pub fn x_pow(k: usize) -> Self {
        FormalMass::monomial(BigRational::one(), k)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>, order: Option<usize>) -> Self {
        if let Some(n) = order {
            coeffs.truncate(n);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FormalMass { coeffs, order }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        FormalMass::from_coeffs(c.iter().map(|&v| rat(v, 1)).collect(), None)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms of degree `≥ order` are unknown; `None` for an exact polynomial.
    pub fn order(&self) -> Option<usize> {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let o = self.order.map_or(order, |x| x.min(order));
        FormalMass::from_coeffs(self.coeffs.clone(), Some(o))
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        FormalMass::from_coeffs(coeffs, self.order.map(|o| o + k))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        FormalMass::from_coeffs(self.coeffs.iter().map(|a| a * c).collect(), self.order)
    }

    fn join_order(a: Option<usize>, b: Option<usize>) -> Option<usize> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    /// `(1 − x^d)^(−1)` modulo `x^order`.
    pub fn geometric(d: usize, order: usize) -> Self {
        assert!(d > 0);
        let mut coeffs = vec![BigRational::zero(); order];
        for k in (0..order).step_by(d) {
            coeffs[k] = BigRational::one();
        }
        FormalMass::from_coeffs(coeffs, Some(order))
    }

    /// `(1 − x^d)^(−e)` modulo `x^order`, by the binomial series.
    pub fn geometric_pow(d: usize, e: u64, order: usize) -> Self {
        assert!(d > 0);
        let mut coeffs = vec![BigRational::zero(); order];
        let mut c = BigInt::one();
        let mut j = 0u64;
        while (j as usize) * d < order {
            coeffs[j as usize * d] = BigRational::from_integer(c.clone());
            // C(e + j, j+1) / C(e + j - 1, j) = (e + j)/(j + 1)
            c = c * BigInt::from(e + j) / BigInt::from(j + 1);
            j += 1;
        }
        FormalMass::from_coeffs(coeffs, Some(order))
    }

    /// Exact value at a rational point; errors on a truncated series.
    pub fn eval_exact(&self, x: &BigRational) -> Result<BigRational> {
        if !self.is_exact() {
            return Err(Error::InvalidArgument(
                "exact evaluation of a truncated series".into(),
            ));
        }
        Ok(self.eval_partial(x))
    }

    /// Value of the known terms at a rational point.
    pub fn eval_partial(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Sum of absolute values of coefficients of degree `≥ k` at `|x|`.
    pub fn tail_abs_f64(&self, from: usize, x: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(from)
            .map(|(k, c)| c.abs().to_f64().unwrap_or(f64::INFINITY) * x.abs().powi(k as i32))
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(MassJson {
            coefficients: self.coeffs.iter().map(rat_to_string).collect(),
            order: self.order,
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: MassJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let coeffs = j
            .coefficients
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<_>>()?;
        Ok(FormalMass::from_coeffs(coeffs, j.order))
    }
}

#[derive(Serialize, Deserialize)]
struct MassJson {
    coefficients: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<usize>,
}

impl fmt::Display for FormalMass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = a.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (k, true) => write!(f, "x^{k}")?,
                (k, false) => write!(f, "{a}*x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(o) = self.order {
            write!(f, " + O(x^{o})")?;
        }
        Ok(())
    }
}

impl Add<&FormalMass> for &FormalMass {
    type Output = FormalMass;
    fn add(self, rhs: &FormalMass) -> FormalMass {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        FormalMass::from_coeffs(coeffs, FormalMass::join_order(self.order, rhs.order))
    }
}

impl Sub<&FormalMass> for &FormalMass {
    type Output = FormalMass;
    fn sub(self, rhs: &FormalMass) -> FormalMass {
        self + &(-rhs)
    }
}

impl Neg for &FormalMass {
    type Output = FormalMass;
    fn neg(self) -> FormalMass {
        FormalMass::from_coeffs(self.coeffs.iter().map(|c| -c).collect(), self.order)
    }
}

impl Mul<&FormalMass> for &FormalMass {
    type Output = FormalMass;
    fn mul(self, rhs: &FormalMass) -> FormalMass {
        let order = FormalMass::join_order(
            self.order.map(|o| o + rhs.low_degree()),
            rhs.order.map(|o| o + self.low_degree()),
        );
        if self.is_zero() || rhs.is_zero() {
            return FormalMass::from_coeffs(Vec::new(), order);
        }
        let mut n = self.coeffs.len() + rhs.coeffs.len() - 1;
        if let Some(o) = order {
            n = n.min(o);
        }
        let mut coeffs = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= n {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        FormalMass::from_coeffs(coeffs, order)
    }
}

impl FormalMass {
    fn low_degree(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for FormalMass {
            type Output = FormalMass;
            fn $m(self, rhs: FormalMass) -> FormalMass {
                (&self).$m(&rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
