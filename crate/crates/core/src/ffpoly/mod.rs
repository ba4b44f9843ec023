//! Arithmetic over F_q and F_q[T].

pub mod cache;
pub mod ext;
pub mod field;
pub mod irreducible;
pub mod poly;
pub mod units;

use std::sync::Arc;

pub use cache::PrimeCache;
pub use ext::ExtField;
pub use field::{Field, FieldSpec};
pub use irreducible::{count_irreducibles, count_irreducibles_u64, factor, is_irreducible, PrimeTable};
pub use poly::FqPoly;
pub use units::{unit_group_order_formula, UnitGroup};

use crate::error::{Error, Result};

/// Monic irreducibles of degree `d` in canonical order, read from or written
/// to `cache` when one is given.
pub fn prime_table(field: &Field, d: u32, cache: Option<&PrimeCache>) -> Result<Arc<PrimeTable>> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be ≥ 1".into()));
    }
    match cache {
        Some(c) => c.table(field, d),
        None => field.prime_table(d),
    }
}

/// As [`prime_table`], materialized as polynomials.
pub fn enumerate_irreducibles(
    field: &Field,
    d: u32,
    cache: Option<&PrimeCache>,
) -> Result<Vec<FqPoly>> {
    Ok(prime_table(field, d, cache)?.iter().collect())
}
