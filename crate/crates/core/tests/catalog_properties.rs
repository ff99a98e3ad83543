use proptest::prelude::*;

use schurpair::catalog::{
    build_group, cyclic, groups_of_order, parse_action, parse_spec, GroupSpec,
};
use schurpair::group::{are_isomorphic, is_extraspecial_pair};

fn odd_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7])
}

fn path() -> impl Strategy<Value = String> {
    "[a-z0-9_./-]{1,12}"
}

fn atom() -> impl Strategy<Value = GroupSpec> {
    prop_oneof![
        Just(GroupSpec::Trivial),
        (1u64..=64).prop_map(GroupSpec::Cyclic),
        (prop::sample::select(vec![2u64, 3, 5]), 0u32..=3)
            .prop_map(|(p, k)| GroupSpec::ElemAb(p, k)),
        Just(GroupSpec::D8),
        Just(GroupSpec::Q8),
        odd_prime().prop_map(GroupSpec::E1),
        odd_prime().prop_map(GroupSpec::E2),
        path().prop_map(GroupSpec::CayleyFile),
    ]
}

/// Left-nested products, with semidirect atoms whose parts are themselves
/// canonical.
fn canonical_spec() -> impl Strategy<Value = GroupSpec> {
    let product = |atoms: BoxedStrategy<GroupSpec>| {
        prop::collection::vec(atoms, 1..=3).prop_map(GroupSpec::product_of)
    };
    let simple = product(atom().boxed()).boxed();
    let semidirect = (simple.clone(), simple, path())
        .prop_map(|(n, k, p)| GroupSpec::Semidirect(Box::new(n), Box::new(k), p))
        .boxed();
    product(prop_oneof![3 => atom(), 1 => semidirect].boxed())
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(spec in canonical_spec()) {
        prop_assume!(spec.validate().is_ok());
        prop_assert_eq!(parse_spec(&spec.to_string()).unwrap(), spec);
    }

    #[test]
    fn spaces_do_not_matter(spec in canonical_spec()) {
        prop_assume!(spec.validate().is_ok());
        let spread = spec.to_string().replace(" x ", "   x\t").replace(", ", " ,  ");
        prop_assert_eq!(parse_spec(&spread).unwrap(), spec);
    }

    #[test]
    fn spec_parser_never_panics(text in "[ZxEDQSdElmAb@0-9(),. 1]{0,40}") {
        let _ = parse_spec(&text);
    }

    #[test]
    fn action_parser_never_panics(text in "[{}\\[\\]\"0-9a-z_:, -]{0,60}") {
        let _ = parse_action(&text, &cyclic(4), &cyclic(2));
    }
}

#[test]
fn small_orders_have_the_classical_counts() {
    for p in [2u64, 3, 5] {
        for (k, count) in [(1u32, 1usize), (2, 2), (3, 5)] {
            let groups = groups_of_order(p, k).unwrap();
            assert_eq!(groups.len(), count, "order {p}^{k}");
            for (i, a) in groups.iter().enumerate() {
                assert_eq!(a.order(), (p as usize).pow(k));
                for b in &groups[i + 1..] {
                    assert!(
                        are_isomorphic(&a.group, &b.group).is_none(),
                        "{} and {}",
                        a.name(),
                        b.name()
                    );
                }
            }
        }
    }
}

#[test]
fn both_extraspecial_models_are_distinct_and_extraspecial() {
    for p in [3u64, 5] {
        let e1 = build_group(&GroupSpec::E1(p)).unwrap();
        let e2 = build_group(&GroupSpec::E2(p)).unwrap();
        assert!(are_isomorphic(&e1, &e2).is_none());
        for g in [&e1, &e2] {
            assert!(is_extraspecial_pair(g, &g.whole(), p).unwrap());
        }
    }
}
