#![no_main]
use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use schurpair::catalog::{build_group, parse_action, GroupSpec};
use schurpair::group::FiniteGroup;

fn groups() -> &'static [(FiniteGroup, FiniteGroup)] {
    static GROUPS: OnceLock<Vec<(FiniteGroup, FiniteGroup)>> = OnceLock::new();
    GROUPS.get_or_init(|| {
        let g = |s| build_group(&s).unwrap();
        vec![
            (g(GroupSpec::Cyclic(4)), g(GroupSpec::Cyclic(2))),
            (g(GroupSpec::ElemAb(2, 2)), g(GroupSpec::Cyclic(3))),
            (g(GroupSpec::Cyclic(9)), g(GroupSpec::Cyclic(3))),
            (g(GroupSpec::Q8), g(GroupSpec::Trivial)),
        ]
    })
}

fuzz_target!(|data: (u8, &str)| {
    let (which, text) = data;
    let (n, k) = &groups()[which as usize % groups().len()];
    let _ = parse_action(text, n, k);
});
