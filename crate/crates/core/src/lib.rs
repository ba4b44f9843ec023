//! Bost–Connes systems for the rational function field F_q(T), computed
//! exactly at finite level: prime tables, divisors and Artin symbols,
//! partition functions, KMS measures on cylinder sets, ratio-set type
//! detection, the Carlitz module and its torsion, and Chebotarev counts.

pub mod error;
pub mod bcmap;
pub mod beta;
pub mod carlitz;
pub mod chebotarev;
pub mod divisors;
pub mod ffpoly;
pub mod mass;
pub mod measures;
pub mod ratioset;
pub mod zeta;

pub use error::{Error, Result};
