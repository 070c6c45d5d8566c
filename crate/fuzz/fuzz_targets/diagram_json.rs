#![no_main]

use libfuzzer_sys::fuzz_target;
use seifert_census::format::{diagram_to_json, parse_diagram_json};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(d) = parse_diagram_json(s) {
        assert_eq!(parse_diagram_json(&diagram_to_json(&d)).expect("round trip"), d);
    }
});
