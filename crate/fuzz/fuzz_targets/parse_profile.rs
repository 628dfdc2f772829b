#![no_main]

use dofsim::io::{parse_profile, write_profile};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_profile(text, false);
    if let Ok(p) = parse_profile(text, true) {
        let k = dofsim::compute_k(&p).value();
        assert!(k > 0.0 && k <= 1.0);
        parse_profile(&write_profile(&p), true).expect("written profile re-parses");
    }
});
