use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use bcff_core::beta::Beta;
use bcff_core::divisors::{field_from_q, ConstDegree, ExtensionSpec, Prime};
use bcff_core::ffpoly::{Field, FqPoly, PrimeCache};
use serde_json::{json, Value};

use crate::{Cli, ExtArgs, Format};

/// Validated global options.
pub struct RunConfig {
    pub field: Field,
    pub modulus: Option<Vec<u32>>,
    pub cache: Option<PrimeCache>,
    pub csv: bool,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        if cli.q < 2 {
            bail!("q must be a prime power ≥ 2, got {}", cli.q);
        }
        let modulus = match &cli.modulus {
            None => None,
            Some(s) => Some(
                s.split(',')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .with_context(|| format!("bad modulus {s:?}"))?,
            ),
        };
        let field = field_from_q(cli.q, modulus.clone())?;
        Ok(RunConfig {
            field,
            modulus,
            cache: cli.cache_dir.as_ref().map(PrimeCache::new),
            csv: cli.format == Format::Csv,
            seed: cli.seed,
            out: cli.out.clone(),
        })
    }

    pub fn cache(&self) -> Option<&PrimeCache> {
        self.cache.as_ref()
    }

    pub fn poly(&self, s: &str) -> Result<FqPoly> {
        Ok(FqPoly::parse(&self.field, s)?)
    }

    pub fn ext(&self, a: &ExtArgs) -> Result<ExtensionSpec> {
        let n = match a.n.trim() {
            "inf" | "∞" => ConstDegree::Infinite,
            s => ConstDegree::Finite(s.parse().with_context(|| format!("bad n {s:?}"))?),
        };
        Ok(ExtensionSpec::new(&self.field, n, self.poly(&a.m)?)?)
    }

    pub fn excluded(&self, s: &str) -> Result<BTreeSet<Prime>> {
        s.split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| Ok(Prime::parse(&self.field, x)?))
            .collect()
    }

    /// The fields every report echoes.
    pub fn echo(&self, extra: Value) -> Value {
        let mut v = json!({ "q": self.field.q(), "seed": self.seed });
        if let Some(m) = &self.modulus {
            v["modulus"] = json!(m);
        }
        if let (Value::Object(dst), Value::Object(src)) = (&mut v, extra) {
            dst.extend(src);
        }
        v
    }
}

pub fn beta(s: &str) -> Result<Beta> {
    Ok(Beta::parse(s)?)
}
