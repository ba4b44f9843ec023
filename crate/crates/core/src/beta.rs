//! Inverse temperature: an exact rational, a float, or `∞`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::mass::parse_rat;

#[derive(Clone, Debug, PartialEq)]
pub enum Beta {
    Exact(BigRational),
    Float(f64),
    Infinity,
}

impl Beta {
    /// Accepts `"p/q"`, an integer, a decimal (inexact), or `"inf"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Beta::Infinity);
        }
        if let Ok(r) = parse_rat(s) {
            return Ok(Beta::Exact(r));
        }
        let v: f64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad β {s:?}")))?;
        if !v.is_finite() {
            return Err(Error::Parse(format!("bad β {s:?}")));
        }
        Ok(Beta::Float(v))
    }

    pub fn integer(n: i64) -> Self {
        Beta::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Beta::Exact(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Beta::Float(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Beta::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Beta::Float(v) => *v,
            Beta::Infinity => f64::INFINITY,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Beta::Exact(r) => r.is_negative(),
            Beta::Float(v) => *v < 0.0,
            Beta::Infinity => false,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Beta::Exact(r) => r.is_zero(),
            Beta::Float(v) => *v == 0.0,
            Beta::Infinity => false,
        }
    }

    /// `Some(n)` for an exact integer β.
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Beta::Exact(r) if r.is_integer() => r.to_integer().to_i64(),
            _ => None,
        }
    }

    pub fn cmp_f64(&self, t: f64) -> std::cmp::Ordering {
        match self {
            Beta::Exact(r) => {
                let tr = BigRational::from_float(t).expect("finite threshold");
                r.cmp(&tr)
            }
            Beta::Float(v) => v.partial_cmp(&t).unwrap(),
            Beta::Infinity => std::cmp::Ordering::Greater,
        }
    }

    /// `x = q^(−β)` exactly, when β is an integer.
    pub fn x_exact(&self, q: u32) -> Option<BigRational> {
        let n = self.as_integer()?;
        let qb = BigInt::from(q);
        let p = qb.pow(n.unsigned_abs() as u32);
        Some(if n >= 0 {
            BigRational::new(BigInt::one(), p)
        } else {
            BigRational::from_integer(p)
        })
    }

    pub fn x_f64(&self, q: u32) -> f64 {
        (q as f64).powf(-self.to_f64())
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Beta::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Beta::Float(v) => write!(f, "{v}"),
            Beta::Infinity => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!(Beta::parse("2").unwrap().as_integer(), Some(2));
        assert_eq!(Beta::parse("1/2").unwrap(), Beta::ratio(1, 2));
        assert_eq!(Beta::parse("0.5").unwrap(), Beta::Float(0.5));
        assert_eq!(Beta::parse("inf").unwrap(), Beta::Infinity);
        assert!(Beta::parse("-1").unwrap().is_negative());
        assert!(Beta::parse("abc").is_err());
        assert!(Beta::parse("1/0").is_err());
        assert!(Beta::parse("NaN").is_err());
    }

    #[test]
    fn exact_x() {
        let b = Beta::integer(2);
        assert_eq!(b.x_exact(2).unwrap().to_string(), "1/4");
        assert!(Beta::ratio(1, 2).x_exact(2).is_none());
        assert_eq!(Beta::ratio(3, 2).cmp_f64(1.0), std::cmp::Ordering::Greater);
    }
}
