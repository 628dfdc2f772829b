#![no_main]

use dofsim::io::{parse_state, write_state};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Anything accepted must survive a write/read cycle.
    if let Ok(s) = parse_state(text) {
        let again = parse_state(&write_state(&s)).expect("written state re-parses");
        assert_eq!(again.photon_number(), s.photon_number());
        assert_eq!(again.len(), s.len());
    }
});
