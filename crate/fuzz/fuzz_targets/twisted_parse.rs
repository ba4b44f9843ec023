#![no_main]

use bcff_core::carlitz::TwistedPoly;
use bcff_core::ffpoly::Field;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let field = Field::prime(3).unwrap();
    if let Ok(t) = TwistedPoly::parse(&field, s) {
        assert_eq!(TwistedPoly::parse(&field, &t.to_string()).unwrap(), t);
    }
});
