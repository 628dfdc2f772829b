#![no_main]

use dofsim::io::{parse_network_document, write_network_document};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(doc) = parse_network_document(text) {
        if doc.network.arms <= 64 {
            let _ = dofsim::single_photon_map(&doc.network);
        }
        let again = parse_network_document(&write_network_document(&doc)).expect("written document re-parses");
        assert_eq!(again.network.arms, doc.network.arms);
    }
});
