//! Replays the checked-in fuzz seeds through the same entry points the
//! fuzz targets call.

use std::fs;
use std::path::PathBuf;

use bcff_core::beta::Beta;
use bcff_core::carlitz::TwistedPoly;
use bcff_core::divisors::{Divisor, ExtensionSpec};
use bcff_core::ffpoly::{cache::parse_table, Field, FqPoly};
use bcff_core::mass::parse_rat;
use bcff_core::measures::{Cylinder, CylinderFn, PrimeCharacter};

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(PathBuf, Vec<u8>)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            let b = fs::read(&p).unwrap();
            (p, b)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out.into_iter().map(|(_, b)| b).collect()
}

fn text(b: &[u8]) -> &str {
    std::str::from_utf8(b).expect("seeds are utf-8")
}

#[test]
fn fqpoly_seeds() {
    let mut ok = 0;
    for s in seeds("fqpoly_parse") {
        let field = Field::prime([2, 3, 5, 7][s[0] as usize % 4]).unwrap();
        if let Ok(f) = FqPoly::parse(&field, text(&s[1..])) {
            assert_eq!(FqPoly::parse(&field, &f.to_string()).unwrap(), f);
            ok += 1;
        }
    }
    assert!(ok >= 3);
}

#[test]
fn divisor_and_twisted_seeds() {
    let f2 = Field::prime(2).unwrap();
    let f3 = Field::prime(3).unwrap();
    let mut ok = 0;
    for s in seeds("divisor_parse") {
        if let Ok(d) = Divisor::parse(&f2, text(&s)) {
            assert_eq!(Divisor::parse(&f2, &d.to_string()).unwrap(), d);
            ok += 1;
        }
    }
    for s in seeds("twisted_parse") {
        if let Ok(t) = TwistedPoly::parse(&f3, text(&s)) {
            assert_eq!(TwistedPoly::parse(&f3, &t.to_string()).unwrap(), t);
            ok += 1;
        }
    }
    assert!(ok >= 5);
}

#[test]
fn cache_seeds() {
    let field = Field::prime(2).unwrap();
    let mut accepted = Vec::new();
    for s in seeds("cache_table") {
        let d = 1 + s[0] as u32 % 10;
        if let Ok(codes) = parse_table(&field, d, text(&s[1..])) {
            accepted.push((d, codes.len()));
        }
    }
    accepted.sort();
    assert_eq!(accepted, vec![(2, 1), (3, 2), (4, 3)]);
}

#[test]
fn json_seeds() {
    let ext = ExtensionSpec::parse(&Field::prime(3).unwrap(), 2, "T").unwrap();
    let mut ok = 0;
    for s in seeds("cylinder_json") {
        if let Ok(z) = Cylinder::from_json(&ext, text(&s)) {
            assert_eq!(Cylinder::from_json(&ext, &z.to_json().to_string()).unwrap(), z);
            ok += 1;
        }
        if CylinderFn::from_json(&ext, text(&s)).is_ok() {
            ok += 1;
        }
    }
    assert!(ok >= 3);
    let exts: Vec<ExtensionSpec> = seeds("extension_json")
        .iter()
        .filter_map(|s| ExtensionSpec::from_json(text(s)).ok())
        .collect();
    assert_eq!(exts.len(), 3);
    for e in exts {
        assert!(e.parse_class("0,1").is_ok());
    }
}

#[test]
fn scalar_seeds() {
    let parsed = seeds("beta_parse")
        .iter()
        .filter(|s| Beta::parse(text(s)).is_ok())
        .count();
    assert_eq!(parsed, 5);
    for s in seeds("beta_parse") {
        let _ = parse_rat(text(&s));
    }
    let f2 = Field::prime(2).unwrap();
    let chars = seeds("character_parse")
        .iter()
        .filter(|s| PrimeCharacter::parse(&f2, text(s), 4).is_ok())
        .count();
    assert_eq!(chars, 2);
}
