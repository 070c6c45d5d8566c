#![no_main]

use libfuzzer_sys::fuzz_target;
use seifert_census::format::{diagram_to_text, parse_diagram_text};
use seifert_census::spinc::d3_from_diagram;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(d) = parse_diagram_text(s) {
        assert_eq!(parse_diagram_text(&diagram_to_text(&d)).expect("round trip"), d);
        if d.components().len() <= 8 {
            // singular linking matrices are an error, never a panic
            let _ = d3_from_diagram(&d);
        }
    }
});
