#![no_main]

use libfuzzer_sys::fuzz_target;
use wfesets::digraph::{self, Digraph};

fuzz_target!(|src: &str| {
    let Ok(a) = Digraph::from_text(src) else { return };
    assert_eq!(Digraph::from_text(&a.to_text()).unwrap(), a);
    // Validation and collapse must not panic on arbitrary shapes.
    if a.edge_count() <= 64 && digraph::validate(&a).is_wfev() {
        let c = digraph::canonicalize(&a).unwrap();
        assert_eq!(digraph::canonicalize(&c).unwrap(), c);
    }
});
