#![no_main]

use libfuzzer_sys::fuzz_target;
use seifert_census::farey::{farey_adjacent, Slope};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = s.parse::<Slope>() {
        let back: Slope = x.to_string().parse().expect("display output parses");
        assert_eq!(back, x);
        assert!(!farey_adjacent(&x, &x));
    }
});
