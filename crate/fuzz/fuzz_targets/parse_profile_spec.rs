#![no_main]

use dofsim::io::parse_profile_spec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(Some(kind)) = parse_profile_spec(text) {
        // Building may fail (d = 0, bad width, huge d), but must not panic.
        // Cap d so a single input cannot exhaust memory.
        let small = match &kind {
            dofsim::ProfileKind::Uniform(d) | dofsim::ProfileKind::Gaussian { d, .. } => *d <= 4096,
            _ => true,
        };
        if small {
            let _ = dofsim::make_profile(&kind);
        }
    }
});
