#![no_main]

use bcff_core::divisors::ExtensionSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(e) = ExtensionSpec::from_json(s) {
        let _ = e.parse_class("0,1");
    }
});
