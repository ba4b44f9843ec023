#![no_main]

use bcff_core::divisors::Divisor;
use bcff_core::ffpoly::Field;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if s.len() > 256 {
        return;
    }
    let field = Field::prime(2).unwrap();
    if let Ok(d) = Divisor::parse(&field, s) {
        assert_eq!(Divisor::parse(&field, &d.to_string()).unwrap(), d);
    }
});
