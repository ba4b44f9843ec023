#![no_main]

use bcff_core::divisors::ExtensionSpec;
use bcff_core::ffpoly::Field;
use bcff_core::measures::{Cylinder, CylinderFn};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let ext = ExtensionSpec::parse(&Field::prime(3).unwrap(), 2, "T").unwrap();
    if let Ok(z) = Cylinder::from_json(&ext, s) {
        let again = Cylinder::from_json(&ext, &z.to_json().to_string()).unwrap();
        assert_eq!(again, z);
    }
    let _ = CylinderFn::from_json(&ext, s);
});
