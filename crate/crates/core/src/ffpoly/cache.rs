//! On-disk tables of monic irreducibles.
//!
//! One file per `(q, d)` named `primes_q{q}_d{d}.txt`. Each line lists the
//! ascending coefficients of one polynomial (leading 1 included), separated by
//! commas; for `q = p^e` a coefficient is written as its `e` coordinates over
//! F_p joined by `:`. Lines follow the canonical order and the file ends with
//! `#count=N`. Tables for a prime-power field live in a subdirectory named
//! after its modulus so that different presentations never share a file.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::warn;

use crate::error::{Error, Result};
use crate::ffpoly::irreducible::{count_irreducibles_u64, is_irreducible, PrimeTable};
use crate::ffpoly::{Field, FqPoly};

/// Tables with more entries than this are computed but not written.
pub const DEFAULT_MAX_ENTRIES: usize = 1 << 20;

#[derive(Clone, Debug)]
pub struct PrimeCache {
    dir: PathBuf,
    max_entries: usize,
}

impl PrimeCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        PrimeCache {
            dir: dir.into(),
            max_entries: DEFAULT_MAX_ENTRIES,
        }
    }

    pub fn with_max_entries(mut self, n: usize) -> Self {
        self.max_entries = n;
        self
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, field: &Field, d: u32) -> PathBuf {
        let name = format!("primes_q{}_d{}.txt", field.q(), d);
        match &field.spec().modulus {
            Some(m) if field.e() > 1 => {
                let tag: Vec<String> = m.iter().map(|c| c.to_string()).collect();
                self.dir
                    .join(format!("p{}_mod_{}", field.p(), tag.join("-")))
                    .join(name)
            }
            _ => self.dir.join(name),
        }
    }

    /// `Ok(None)` when no file exists; a cache error when it is malformed.
    pub fn load(&self, field: &Field, d: u32) -> Result<Option<PrimeTable>> {
        let path = self.path(field, d);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let codes = parse_table(field, d, &text)
            .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        Ok(Some(PrimeTable::from_codes(field, d, codes)))
    }

    /// Atomic write (temporary file, then rename). Returns `false` when the
    /// table exceeds the entry limit and was skipped.
    pub fn store(&self, table: &PrimeTable) -> Result<bool> {
        if table.len() > self.max_entries {
            return Ok(false);
        }
        let path = self.path(table.field(), table.degree());
        let parent = path.parent().unwrap_or(&self.dir);
        fs::create_dir_all(parent)?;
        let tmp = path.with_extension("txt.tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(render_table(table).as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(true)
    }

    /// Load from disk, or sieve and write back. A corrupt file is reported
    /// and replaced.
    pub fn table(&self, field: &Field, d: u32) -> Result<Arc<PrimeTable>> {
        match self.load(field, d) {
            Ok(Some(t)) => return Ok(Arc::new(t)),
            Ok(None) => {}
            Err(Error::Cache(msg)) => warn!("corrupt prime cache, rebuilding: {msg}"),
            Err(e) => return Err(e),
        }
        let t = field.prime_table(d)?;
        if !self.store(&t)? {
            warn!(
                "prime table q={} d={} has {} entries; not cached",
                field.q(),
                d,
                t.len()
            );
        }
        Ok(t)
    }
}

fn render_coeff(field: &Field, c: u32, out: &mut String) {
    if field.e() == 1 {
        write!(out, "{c}").unwrap();
    } else {
        let digits: Vec<String> = field.digits(c).iter().map(|x| x.to_string()).collect();
        out.push_str(&digits.join(":"));
    }
}

pub fn render_table(table: &PrimeTable) -> String {
    let field = table.field();
    let mut out = String::new();
    for p in table.iter() {
        for (i, &c) in p.coeffs().iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            render_coeff(field, c, &mut out);
        }
        out.push('\n');
    }
    writeln!(out, "#count={}", table.len()).unwrap();
    out
}

fn parse_coeff(field: &Field, s: &str) -> Result<u32> {
    let bad = || Error::Parse(format!("bad coefficient {s:?}"));
    let p = field.p();
    if field.e() == 1 {
        let v: u32 = s.trim().parse().map_err(|_| bad())?;
        return if v < p { Ok(v) } else { Err(bad()) };
    }
    let digits: Vec<u32> = s
        .split(':')
        .map(|x| x.trim().parse::<u32>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    if digits.len() != field.e() as usize || digits.iter().any(|&x| x >= p) {
        return Err(bad());
    }
    Ok(field.from_digits(&digits))
}

/// Parse and validate a cache file body. Every entry must be monic of
/// degree `d`, irreducible, strictly increasing, and the checksum line must
/// agree with both the entry count and the necklace formula.
pub fn parse_table(field: &Field, d: u32, text: &str) -> Result<Vec<u32>> {
    let mut codes: Vec<u32> = Vec::new();
    let mut checksum = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if checksum.is_some() {
            return Err(Error::Parse(format!("line {}: data after checksum", lineno + 1)));
        }
        if let Some(n) = line.strip_prefix("#count=") {
            let n: usize = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad checksum {line:?}")))?;
            checksum = Some(n);
            continue;
        }
        let coeffs: Vec<u32> = line
            .split(',')
            .map(|c| parse_coeff(field, c))
            .collect::<Result<_>>()?;
        if coeffs.len() != d as usize + 1 || coeffs[d as usize] != 1 {
            return Err(Error::Parse(format!(
                "line {}: not monic of degree {d}",
                lineno + 1
            )));
        }
        let p = FqPoly::new(field, coeffs);
        let code = p.lex_code();
        if codes.last().is_some_and(|&last| last as u64 >= code) {
            return Err(Error::Parse(format!("line {}: out of order", lineno + 1)));
        }
        if !is_irreducible(&p)? {
            return Err(Error::Parse(format!("line {}: {p} is reducible", lineno + 1)));
        }
        codes.push(code as u32);
    }
    let n = checksum.ok_or_else(|| Error::Parse("missing #count line".into()))?;
    if n != codes.len() {
        return Err(Error::Parse(format!(
            "checksum {n} but {} entries",
            codes.len()
        )));
    }
    if count_irreducibles_u64(field.q() as u64, d) != Some(n as u64) {
        return Err(Error::Parse(format!("{n} entries is not the number of primes")));
    }
    Ok(codes)
}
