use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ffpoly::{Field, FqPoly};

/// Largest `q^d` the sieve will allocate a bitmap for.
pub const SIEVE_LIMIT: u64 = 1 << 32;

/// Monic irreducibles of one degree, stored as lexicographic codes.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    field: Field,
    degree: u32,
    codes: Vec<u32>,
}

impl PrimeTable {
    pub(crate) fn from_codes(field: &Field, degree: u32, codes: Vec<u32>) -> Self {
        PrimeTable {
            field: field.clone(),
            degree,
            codes,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    pub fn get(&self, i: usize) -> FqPoly {
        FqPoly::from_lex_code(&self.field, self.degree as usize, self.codes[i] as u64)
    }

    pub fn iter(&self) -> impl Iterator<Item = FqPoly> + '_ {
        (0..self.codes.len()).map(move |i| self.get(i))
    }

    pub fn contains(&self, f: &FqPoly) -> bool {
        f.is_monic()
            && f.deg() == self.degree as usize
            && self.codes.binary_search(&(f.lex_code() as u32)).is_ok()
    }
}

/// Sieve of Eratosthenes over monic polynomials of degree `d`: every
/// product `p·g` with `deg p ≤ d/2` is struck out, the survivors are prime.
pub(crate) fn sieve_irreducibles(field: &Field, d: u32) -> Result<PrimeTable> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be ≥ 1".into()));
    }
    let q = field.q() as u64;
    let size = match q.checked_pow(d) {
        Some(s) if s <= SIEVE_LIMIT => s,
        _ => {
            return Err(Error::TooLarge {
                what: "monic polynomial space",
                size: (q as u128).saturating_pow(d),
                limit: SIEVE_LIMIT as u128,
            })
        }
    };
    if d == 1 {
        return Ok(PrimeTable::from_codes(field, 1, (0..q as u32).collect()));
    }
    let mut marked = vec![0u64; size.div_ceil(64) as usize];
    // bitmap index has c₀ least significant so inner odometer steps stay local
    if field.is_prime_field() && q <= 7 && d <= 15 {
        sieve_packed(field, d, &mut marked)?;
    } else {
        sieve_generic(field, d, &mut marked)?;
    }

    let mut codes = Vec::new();
    for (w, &word) in marked.iter().enumerate() {
        let mut free = !word;
        while free != 0 {
            let b = free.trailing_zeros() as u64;
            let c = (w as u64) * 64 + b;
            if c >= size {
                break;
            }
            codes.push(reverse_digits(c, q, d) as u32);
            free &= free - 1;
        }
    }
    codes.sort_unstable();
    Ok(PrimeTable::from_codes(field, d, codes))
}

fn mark(marked: &mut [u64], idx: u64) {
    marked[(idx >> 6) as usize] |= 1 << (idx & 63);
}

fn sieve_generic(field: &Field, d: u32, marked: &mut [u64]) -> Result<()> {
    let q = field.q() as u64;
    let du = d as usize;
    let weights: Vec<i64> = (0..du).map(|j| q.pow(j as u32) as i64).collect();
    for k in 1..=d / 2 {
        let table = field.prime_table(k)?;
        let r = du - k as usize;
        for p in table.iter() {
            let pc = p.coeffs();
            let mut prod = vec![0u32; du + 1];
            prod[r..].copy_from_slice(pc);
            let mut idx: i64 = (0..du).map(|j| prod[j] as i64 * weights[j]).sum();
            mark(marked, idx as u64);
            let mut g = vec![0u32; r];
            'odometer: loop {
                let mut t = 0;
                loop {
                    if t == r {
                        break 'odometer;
                    }
                    let old = g[t];
                    let new = if old + 1 == q as u32 { 0 } else { old + 1 };
                    g[t] = new;
                    let delta = field.sub(new, old);
                    for (i, &c) in pc.iter().enumerate() {
                        let j = t + i;
                        let before = prod[j];
                        let after = field.add(before, field.mul(delta, c));
                        prod[j] = after;
                        idx += (after as i64 - before as i64) * weights[j];
                    }
                    if new != 0 {
                        break;
                    }
                    t += 1;
                }
                mark(marked, idx as u64);
            }
        }
    }
    Ok(())
}

/// Prime `q ≤ 7`, `d ≤ 15`: one coefficient per nibble of a `u64`, reduced
/// lane-wise, and mapped to the bitmap index through per-byte tables.
fn sieve_packed(field: &Field, d: u32, marked: &mut [u64]) -> Result<()> {
    const LOW: u64 = 0x1111_1111_1111_1111;
    const HIGH: u64 = 0x8888_8888_8888_8888;
    let q = field.q() as u64;
    let bias = (8 - q) * LOW;
    let mut lut = vec![0u64; 8 * 256];
    for b in 0..8u32 {
        for byte in 0..256u64 {
            let mut v = 0;
            for half in 0..2u32 {
                let pos = 2 * b + half;
                let c = (byte >> (4 * half)) & 0xf;
                if pos < d && c < q {
                    v += c * q.pow(pos);
                }
            }
            lut[(b as usize) * 256 + byte as usize] = v;
        }
    }
    let index = |x: u64| -> u64 {
        (0..8)
            .map(|b| lut[b * 256 + ((x >> (8 * b)) & 0xff) as usize])
            .sum()
    };
    let du = d as usize;
    for k in 1..=d / 2 {
        let table = field.prime_table(k)?;
        let r = du - k as usize;
        for p in table.iter() {
            let packed: u64 = p
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, &c)| (c as u64) << (4 * i))
                .sum();
            let shifts: Vec<u64> = (0..r).map(|t| packed << (4 * t)).collect();
            let mut prod = packed << (4 * r);
            mark(marked, index(prod));
            let mut g = vec![0u32; r];
            'odometer: loop {
                let mut t = 0;
                loop {
                    if t == r {
                        break 'odometer;
                    }
                    // each digit step, carry or not, adds p·T^t
                    let s = prod + shifts[t];
                    let ge = ((s + bias) & HIGH) >> 3;
                    prod = s - ge * q;
                    g[t] += 1;
                    if g[t] < q as u32 {
                        break;
                    }
                    g[t] = 0;
                    t += 1;
                }
                mark(marked, index(prod));
            }
        }
    }
    Ok(())
}

fn reverse_digits(mut x: u64, q: u64, d: u32) -> u64 {
    let mut out = 0;
    for _ in 0..d {
        out = out * q + x % q;
        x /= q;
    }
    out
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `T^(q^k) mod f`, by `k` successive `q`-th powers.
fn frobenius_power(f: &FqPoly, k: u64) -> FqPoly {
    let q = f.field().q() as u128;
    let mut x = FqPoly::t(f.field()).rem(f);
    for _ in 0..k {
        x = x.pow_mod(q, f);
    }
    x
}

/// Rabin's test: `f` of degree `n` is irreducible iff `f | T^(q^n) − T` and
/// `gcd(T^(q^(n/r)) − T, f) = 1` for every prime `r | n`. Deterministic.
pub fn is_irreducible(f: &FqPoly) -> Result<bool> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    let f = f.monic();
    let n = f.deg() as u64;
    if n == 1 {
        return Ok(true);
    }
    let t = FqPoly::t(f.field());
    if !(frobenius_power(&f, n) - t.clone()).rem(&f).is_zero() {
        return Ok(false);
    }
    for r in prime_divisors(n) {
        let h = frobenius_power(&f, n / r) - t.clone();
        if !h.gcd(&f).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Number of monic irreducibles of degree `d` over F_q:
/// `(1/d) Σ_{e|d} μ(e) q^(d/e)`.
pub fn count_irreducibles(q: u64, d: u32) -> BigUint {
    assert!(d >= 1, "degree must be ≥ 1");
    let qb = BigInt::from(q);
    let mut acc = BigInt::zero();
    for e in 1..=d {
        if d % e == 0 {
            let mu = mobius(e as u64);
            if mu != 0 {
                acc += BigInt::from(mu) * qb.pow(d / e);
            }
        }
    }
    let out = acc / BigInt::from(d);
    debug_assert!(!out.is_negative());
    out.to_biguint().unwrap()
}

/// [`count_irreducibles`] as a machine integer, when it fits.
pub fn count_irreducibles_u64(q: u64, d: u32) -> Option<u64> {
    count_irreducibles(q, d).to_u64()
}

/// Factorization into monic irreducibles with multiplicities, sorted in
/// canonical order, together with the leading coefficient.
pub fn factor(f: &FqPoly) -> Result<(u32, Vec<(FqPoly, u32)>)> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("cannot factor the zero polynomial".into()));
    }
    let lc = f.leading();
    let mut out: Vec<(FqPoly, u32)> = Vec::new();
    let mut rest = f.monic();
    let field = f.field().clone();
    let mut k = 1u32;
    while rest.deg() > 0 {
        if (rest.deg() as u32) < 2 * k {
            push_factor(&mut out, rest.clone());
            break;
        }
        // product of all degree-k factors present in `rest`
        let part = (frobenius_power(&rest, k as u64) - FqPoly::t(&field)).gcd(&rest);
        if !part.is_one() {
            for p in split_equal_degree(&part, k)? {
                while p.divides(&rest) {
                    rest = rest.div_rem(&p).0;
                    push_factor(&mut out, p.clone());
                }
            }
        }
        k += 1;
    }
    out.sort();
    Ok((lc, out))
}

fn push_factor(out: &mut Vec<(FqPoly, u32)>, p: FqPoly) {
    match out.iter_mut().find(|(g, _)| *g == p) {
        Some((_, e)) => *e += 1,
        None => out.push((p, 1)),
    }
}

/// Split a squarefree product of degree-`k` irreducibles into its factors.
fn split_equal_degree(g: &FqPoly, k: u32) -> Result<Vec<FqPoly>> {
    let n = g.deg() as u32 / k;
    if n == 1 {
        return Ok(vec![g.clone()]);
    }
    let field = g.field();
    if (field.q() as u64).checked_pow(k).is_some_and(|s| s <= 1 << 16) {
        let table = field.prime_table(k)?;
        return Ok(table.iter().filter(|p| p.divides(g)).collect());
    }
    // Cantor–Zassenhaus driven by a fixed enumeration of residues
    let mut stack = vec![g.clone()];
    let mut done = Vec::new();
    let q = field.q() as u128;
    let mut idx = field.q() as u64;
    while let Some(h) = stack.pop() {
        if h.deg() as u32 == k {
            done.push(h);
            continue;
        }
        loop {
            let a = FqPoly::from_residue_index(field, idx).rem(&h);
            idx += 1;
            if a.is_constant() {
                continue;
            }
            let s = if field.p() == 2 {
                let mut acc = a.clone();
                let mut term = a.clone();
                for _ in 1..(k * field.e()) {
                    term = term.mul_mod(&term, &h);
                    acc = &acc + &term;
                }
                acc
            } else {
                let e = (q.pow(k) - 1) / 2;
                a.pow_mod(e, &h) - FqPoly::one(field)
            };
            let d = s.gcd(&h);
            if !d.is_one() && d.deg() < h.deg() {
                let other = h.div_rem(&d).0;
                stack.push(d);
                stack.push(other.monic());
                break;
            }
        }
    }
    Ok(done)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(q: u32, s: &str) -> FqPoly {
        FqPoly::parse(&Field::prime(q).unwrap(), s).unwrap()
    }

    #[test]
    fn rabin_examples() {
        assert!(is_irreducible(&poly(2, "T^2+T+1")).unwrap());
        assert!(!is_irreducible(&poly(2, "T^2+1")).unwrap());
        assert!(is_irreducible(&poly(3, "T^2+1")).unwrap());
        assert!(is_irreducible(&poly(3, "2*T^2+2")).unwrap());
        assert!(matches!(
            is_irreducible(&poly(3, "2")),
            Err(Error::ConstantPolynomial)
        ));
        // (T^2+T+1)^2 and (T^2+T+1)(T^3+T+1) over F_2
        assert!(!is_irreducible(&poly(2, "T^4+T^2+1")).unwrap());
        assert!(!is_irreducible(&poly(2, "T^5+T^4+1")).unwrap());
    }

    #[test]
    fn necklace_counts() {
        assert_eq!(count_irreducibles_u64(2, 5), Some(6));
        assert_eq!(count_irreducibles_u64(2, 6), Some(9));
        assert_eq!(count_irreducibles_u64(3, 2), Some(3));
        assert_eq!(count_irreducibles_u64(2, 8), Some(30));
    }

    #[test]
    fn sieve_small_cases() {
        let f2 = Field::prime(2).unwrap();
        let t = sieve_irreducibles(&f2, 2).unwrap();
        let v: Vec<String> = t.iter().map(|p| p.to_string()).collect();
        assert_eq!(v, vec!["T^2+T+1"]);
        assert_eq!(sieve_irreducibles(&f2, 4).unwrap().len(), 3);
    }

    #[test]
    fn sieve_agrees_with_rabin() {
        for q in [2u32, 3, 5] {
            let f = Field::prime(q).unwrap();
            for d in 1..=4 {
                let t = sieve_irreducibles(&f, d).unwrap();
                let brute: Vec<FqPoly> = FqPoly::monics(&f, d as usize)
                    .filter(|p| is_irreducible(p).unwrap())
                    .collect();
                assert_eq!(t.iter().collect::<Vec<_>>(), brute, "q={q} d={d}");
            }
        }
    }

    #[test]
    fn generic_sieve_path() {
        let f11 = Field::prime(11).unwrap();
        let f4 = Field::new(crate::ffpoly::FieldSpec::prime_power(2, vec![1, 1, 1])).unwrap();
        for (f, d) in [(f11, 3u32), (f4, 4)] {
            let t = sieve_irreducibles(&f, d).unwrap();
            let brute: Vec<FqPoly> = FqPoly::monics(&f, d as usize)
                .filter(|p| is_irreducible(p).unwrap())
                .collect();
            assert_eq!(t.iter().collect::<Vec<_>>(), brute);
            assert_eq!(Some(t.len() as u64), count_irreducibles_u64(f.q() as u64, d));
        }
    }

    #[test]
    fn factor_reassembles() {
        let f = poly(3, "2*T^7+T^5+T^2+2*T+1");
        let (lc, fs) = factor(&f).unwrap();
        let mut prod = FqPoly::constant(f.field(), lc);
        for (p, e) in &fs {
            assert!(is_irreducible(p).unwrap());
            prod = &prod * &p.pow(*e);
        }
        assert_eq!(prod, f);
    }

    #[test]
    fn cantor_zassenhaus_path() {
        // over F_257 the degree-2 table is out of the trial-division range
        let f = Field::prime(257).unwrap();
        let a = FqPoly::parse(&f, "T^2+3").unwrap();
        let b = FqPoly::parse(&f, "T^2+5").unwrap();
        let c = FqPoly::parse(&f, "T+7").unwrap();
        let g = &(&a * &b) * &(&c * &c);
        let (_, fs) = factor(&g).unwrap();
        let mut expect = Vec::new();
        for p in [&a, &b, &c] {
            if is_irreducible(p).unwrap() {
                expect.push(p.clone());
            }
        }
        let got: Vec<FqPoly> = fs.iter().map(|(p, _)| p.clone()).collect();
        assert!(fs.iter().all(|(p, _)| is_irreducible(p).unwrap()));
        let mut prod = FqPoly::one(&f);
        for (p, e) in &fs {
            prod = &prod * &p.pow(*e);
        }
        assert_eq!(prod, g);
        assert!(got.len() >= expect.len());
    }
}
