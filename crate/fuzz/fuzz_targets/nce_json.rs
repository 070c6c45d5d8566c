#![no_main]

use libfuzzer_sys::fuzz_target;
use seifert_census::cfrac::{eval_nce, nce, Nce};

fuzz_target!(|data: &[u8]| {
    let Ok(c) = serde_json::from_slice::<Nce>(data) else { return };
    if c.len() <= 64 {
        assert_eq!(nce(&eval_nce(&c)).expect("valid expansions evaluate below -1"), c);
    }
});
