#![no_main]

use gcchern::moduli::parse_infinite_certificate;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cert) = parse_infinite_certificate(text) {
        let again = serde_json::to_string(&cert).expect("serializes");
        assert_eq!(parse_infinite_certificate(&again).expect("re-parses"), cert);
    }
});
