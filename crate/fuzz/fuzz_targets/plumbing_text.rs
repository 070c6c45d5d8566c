#![no_main]

use libfuzzer_sys::fuzz_target;
use seifert_census::format::{parse_plumbing_text, plumbing_to_text};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_plumbing_text(s) {
        assert_eq!(parse_plumbing_text(&plumbing_to_text(&g)).expect("round trip"), g);
    }
});
