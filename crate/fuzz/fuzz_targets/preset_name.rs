#![no_main]

use gcchern::manifold::{preset, validate};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(name) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = preset(name) {
        assert!(validate(&m).is_valid(), "preset {name} is invalid");
    }
});
