#![no_main]

use bcff_core::ffpoly::{Field, FqPoly};
use libfuzzer_sys::fuzz_target;

// First byte picks the field.
fuzz_target!(|data: &[u8]| {
    let Some((&k, rest)) = data.split_first() else {
        return;
    };
    let Ok(s) = std::str::from_utf8(rest) else {
        return;
    };
    let q = [2, 3, 5, 7][k as usize % 4];
    let field = Field::prime(q).unwrap();
    if let Ok(f) = FqPoly::parse(&field, s) {
        let back = FqPoly::parse(&field, &f.to_string()).unwrap();
        assert_eq!(back, f);
    }
});
