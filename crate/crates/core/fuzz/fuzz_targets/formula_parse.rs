#![no_main]

use libfuzzer_sys::fuzz_target;
use wfesets::formula;

fuzz_target!(|src: &str| {
    let Ok(f) = formula::parse(src) else { return };
    assert_eq!(formula::parse(&f.to_string()).unwrap(), f);
    if !f.has_constants() && f.params().is_empty() && f.symbol_count() <= 64 {
        if let Ok(code) = formula::godelize(&f) {
            assert_eq!(formula::degodelize(&code), Some(f));
        }
    }
});
