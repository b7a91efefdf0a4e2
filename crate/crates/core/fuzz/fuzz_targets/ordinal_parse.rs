#![no_main]

use libfuzzer_sys::fuzz_target;
use wfesets::ordinal::CnfOrdinal;

fuzz_target!(|src: &str| {
    if src.len() > 1024 {
        return;
    }
    let Ok(a) = src.parse::<CnfOrdinal>() else { return };
    assert_eq!(a.to_string().parse::<CnfOrdinal>().unwrap(), a);
    assert_eq!(a.add(&CnfOrdinal::zero()), a);
    assert_eq!(a.mul(&CnfOrdinal::one()), a);
});
