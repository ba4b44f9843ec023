#![no_main]

use bcff_core::beta::Beta;
use bcff_core::mass::parse_rat;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let _ = Beta::parse(s);
    let _ = parse_rat(s);
});
