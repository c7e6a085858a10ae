#![no_main]

use gcchern::manifold::preset;
use gcchern_cli::class_expr;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(expr) = std::str::from_utf8(data) else {
        return;
    };
    for name in ["CP2", "S2xS2", "E(1)"] {
        let m = preset(name).expect("preset");
        if let Ok(x) = class_expr::parse(&m, expr) {
            assert_eq!(x.len(), m.rank());
        }
    }
});
