#![no_main]

use libfuzzer_sys::fuzz_target;
use num_bigint::BigUint;
use wfesets::formula;

fuzz_target!(|data: &[u8]| {
    if data.len() > 64 {
        return;
    }
    let code = BigUint::from_bytes_be(data);
    if let Some(f) = formula::degodelize(&code) {
        assert_eq!(formula::godelize(&f).unwrap(), code);
    }
});
