#![no_main]

use libfuzzer_sys::fuzz_target;
use seifert_census::Rational;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = s.parse::<Rational>() {
        let back: Rational = r.to_string().parse().expect("display output parses");
        assert_eq!(back, r);
    }
});
