#![no_main]

use libfuzzer_sys::fuzz_target;
use wfesets::digraph::Digraph;

fuzz_target!(|src: &str| {
    let Ok(a) = Digraph::from_json(src) else { return };
    assert_eq!(Digraph::from_json(&a.to_json().to_string()).unwrap(), a);
    assert_eq!(Digraph::parse(&a.to_text()).unwrap(), a);
});
