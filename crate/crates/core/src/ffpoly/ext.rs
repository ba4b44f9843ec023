//! Finite extensions `F_q[X]/(g)` and F_q-linear algebra on them.

use crate::error::{Error, Result};
use crate::ffpoly::{is_irreducible, Field, FqPoly};

/// The field `F_q[X]/(g)` for a monic irreducible `g` of degree `s`.
/// Elements are [`FqPoly`] residues of degree `< s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    modulus: FqPoly,
}

impl ExtField {
    pub fn new(modulus: FqPoly) -> Result<Self> {
        if !modulus.is_monic() || !is_irreducible(&modulus)? {
            return Err(Error::InvalidArgument(format!(
                "{modulus} is not a monic irreducible"
            )));
        }
        Ok(ExtField { modulus })
    }

    /// `F_{q^s}` presented by the lexicographically first monic irreducible
    /// of degree `s`.
    pub fn of_degree(field: &Field, s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("extension degree must be ≥ 1".into()));
        }
        if s == 1 {
            return Ok(ExtField {
                modulus: FqPoly::t(field),
            });
        }
        // codes below q^(s−1) have c₀ = 0 and are divisible by T
        let q = field.q() as u64;
        let start = q.pow(s as u32 - 1);
        for code in start..start * q {
            let g = FqPoly::from_lex_code(field, s, code);
            if is_irreducible(&g)? {
                return Ok(ExtField { modulus: g });
            }
        }
        unreachable!("irreducibles exist in every degree")
    }

    pub fn base(&self) -> &Field {
        self.modulus.field()
    }

    pub fn modulus(&self) -> &FqPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    /// `q^s`, saturating.
    pub fn size(&self) -> u128 {
        (self.base().q() as u128).saturating_pow(self.degree() as u32)
    }

    pub fn zero(&self) -> FqPoly {
        FqPoly::zero(self.base())
    }

    pub fn one(&self) -> FqPoly {
        FqPoly::one(self.base()).rem(&self.modulus)
    }

    pub fn constant(&self, c: u32) -> FqPoly {
        FqPoly::constant(self.base(), c).rem(&self.modulus)
    }

    pub fn add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        a + b
    }

    pub fn mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        a.mul_mod(b, &self.modulus)
    }

    pub fn pow(&self, a: &FqPoly, k: u128) -> FqPoly {
        a.pow_mod(k, &self.modulus)
    }

    /// `a ↦ a^q`.
    pub fn frob(&self, a: &FqPoly) -> FqPoly {
        self.pow(a, self.base().q() as u128)
    }

    pub fn inv(&self, a: &FqPoly) -> Option<FqPoly> {
        if a.is_zero() {
            None
        } else {
            a.inv_mod(&self.modulus)
        }
    }

    /// Coordinates in the power basis `1, X, …, X^(s−1)`.
    pub fn coords(&self, a: &FqPoly) -> Vec<u32> {
        (0..self.degree()).map(|i| a.coeff(i)).collect()
    }

    pub fn from_coords(&self, c: &[u32]) -> FqPoly {
        FqPoly::new(self.base(), c.to_vec())
    }

    /// Evaluate a polynomial over F_q at an element of this field.
    pub fn eval(&self, f: &FqPoly, at: &FqPoly) -> FqPoly {
        let mut acc = self.zero();
        for &c in f.coeffs().iter().rev() {
            acc = &self.mul(&acc, at) + &self.constant(c);
        }
        acc
    }

    /// Kernel of an F_q-linear map, given by its values on the power basis.
    pub fn linear_kernel(&self, images: &[FqPoly]) -> Vec<FqPoly> {
        let cols: Vec<Vec<u32>> = images.iter().map(|z| self.coords(z)).collect();
        kernel(self.base(), self.degree(), &cols)
            .into_iter()
            .map(|v| self.from_coords(&v))
            .collect()
    }

    /// Every F_q-combination of `basis`, in odometer order on coefficients.
    pub fn span(&self, basis: &[FqPoly]) -> Vec<FqPoly> {
        let mut out = vec![self.zero()];
        for b in basis {
            let mut next = Vec::with_capacity(out.len() * self.base().q() as usize);
            for c in 0..self.base().q() {
                let scaled = b.scale(c);
                next.extend(out.iter().map(|x| x + &scaled));
            }
            out = next;
        }
        out
    }
}

/// Null space of the `rows × cols.len()` matrix whose columns are `cols`.
pub fn kernel(field: &Field, rows: usize, cols: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = cols.len();
    let mut a: Vec<Vec<u32>> = (0..rows)
        .map(|i| (0..n).map(|j| cols[j].get(i).copied().unwrap_or(0)).collect())
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = field.inv(a[r][c]).unwrap();
        for x in a[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..n {
                    let t = field.mul(f, a[r][j]);
                    a[i][j] = field.sub(a[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u32; n];
        v[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = field.neg(a[row][free]);
        }
        basis.push(v);
    }
    basis
}

pub fn rank(field: &Field, rows: usize, cols: &[Vec<u32>]) -> usize {
    cols.len() - kernel(field, rows, cols).len()
}
