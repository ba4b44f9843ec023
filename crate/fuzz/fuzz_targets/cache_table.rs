#![no_main]

use bcff_core::ffpoly::{cache::parse_table, Field};
use libfuzzer_sys::fuzz_target;

// First byte picks the degree.
fuzz_target!(|data: &[u8]| {
    let Some((&d, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let field = Field::prime(2).unwrap();
    let d = 1 + d as u32 % 10;
    if let Ok(codes) = parse_table(&field, d, text) {
        assert!(codes.windows(2).all(|w| w[0] < w[1]));
    }
});
