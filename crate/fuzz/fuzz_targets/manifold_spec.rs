#![no_main]

use gcchern::json::{manifold_spec_json, parse_manifold_spec};
use gcchern::manifold::validate;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(m) = parse_manifold_spec(text) else {
        return;
    };
    let report = validate(&m);
    if report.is_valid() {
        let again = parse_manifold_spec(&manifold_spec_json(&m)).expect("round trip");
        assert_eq!(again.lattice, m.lattice);
    }
});
