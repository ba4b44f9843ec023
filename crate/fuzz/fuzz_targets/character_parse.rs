#![no_main]

use bcff_core::ffpoly::Field;
use bcff_core::measures::PrimeCharacter;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if s.len() > 256 {
        return;
    }
    let _ = PrimeCharacter::parse(&Field::prime(2).unwrap(), s, 4);
});
