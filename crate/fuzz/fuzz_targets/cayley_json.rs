#![no_main]
use libfuzzer_sys::fuzz_target;
use schurpair::group::FiniteGroup;

fuzz_target!(|data: &str| {
    if let Ok(g) = FiniteGroup::from_json(data) {
        // Anything accepted must survive a trip through its own encoding.
        let back = FiniteGroup::from_json(&g.to_json()).expect("re-encoded table parses");
        assert_eq!(back.rows(), g.rows());
    }
});
