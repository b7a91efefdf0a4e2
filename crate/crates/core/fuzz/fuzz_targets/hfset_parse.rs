#![no_main]

use libfuzzer_sys::fuzz_target;
use wfesets::hfset::{self, HfSet};

fuzz_target!(|src: &str| {
    if src.len() > 4096 {
        return;
    }
    let Ok(s) = src.parse::<HfSet>() else { return };
    assert_eq!(s.to_string().parse::<HfSet>().unwrap(), s);
    if s.rank() <= 64 {
        assert_eq!(hfset::collapse(&hfset::encode_set(&s)).unwrap().value, s);
    }
});
