#![no_main]

use libfuzzer_sys::fuzz_target;
use seifert_census::format::{parse_plumbing_json, plumbing_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_plumbing_json(s) {
        assert_eq!(parse_plumbing_json(&plumbing_to_json(&g)).expect("round trip"), g);
    }
});
