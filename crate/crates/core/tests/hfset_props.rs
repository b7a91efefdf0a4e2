use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wfesets::digraph;
use wfesets::hfset::{self, HfSet};
use wfesets_testkit as kit;

fn hfset_strategy() -> impl Strategy<Value = HfSet> {
    Just(HfSet::empty()).prop_recursive(4, 24, 4, |inner| prop::collection::vec(inner, 0..4).prop_map(HfSet::new))
}

fn wfev_strategy(max_nodes: usize) -> impl Strategy<Value = digraph::Digraph> {
    any::<u64>().prop_map(move |seed| kit::random_wfev(&mut ChaCha8Rng::seed_from_u64(seed), max_nodes))
}

// Ackermann index straight from the sum formula, in u128.
fn naive_index(s: &HfSet) -> u128 {
    s.iter().map(|e| 1u128 << naive_index(e)).sum()
}

fn level(n: usize) -> BTreeSet<HfSet> {
    hfset::v_level(n).unwrap()
}

#[test]
fn levels_match_string_powersets() {
    for n in 0..=4 {
        let ours: BTreeSet<String> = level(n).iter().map(kit::naive_set).collect();
        assert_eq!(ours, kit::naive_level(n), "V_{n}");
    }
    assert_eq!(level(5).len(), 65536);
    assert!(hfset::v_level(6).is_err());
}

#[test]
fn ackermann_index_orders_v4_bijectively() {
    let indices: BTreeSet<u128> = level(4).iter().map(naive_index).collect();
    assert_eq!(indices, (0..16).collect());
    for s in level(4) {
        assert_eq!(s.ack_index().unwrap(), BigUint::from(naive_index(&s)));
    }
}

#[test]
fn collapse_inverts_encoding_on_v4() {
    for s in level(4) {
        let d = hfset::encode_set(&s);
        assert_eq!(hfset::collapse(&d).unwrap().value, s);
        assert_eq!(kit::naive_realization(&d), kit::naive_set(&s));
    }
}

#[test]
fn transitive_closure_is_least_on_v4() {
    let v4 = level(4);
    let transitive: Vec<BTreeSet<HfSet>> = kit::transitive_subfamilies(&v4);
    for s in &v4 {
        let tc = hfset::transitive_closure(s);
        assert!(hfset::is_transitive_family(&tc));
        assert!(s.iter().all(|e| tc.contains(e)));
        for t in &transitive {
            if s.iter().all(|e| t.contains(e)) {
                assert!(tc.is_subset(t));
            }
        }
    }
}

#[test]
fn pair_closure_grows_with_depth() {
    let v2 = level(2);
    let mut previous = v2.clone();
    for depth in 1..=2 {
        let next = hfset::pair_closure_bounded(&v2, 2, depth);
        assert!(previous.is_subset(&next));
        previous = next;
    }
    assert_eq!(hfset::pair_closure_bounded(&v2, 2, 0), v2);
    assert_eq!(hfset::pair_closure_bounded(&v2, 2, 1), level(3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn brace_syntax_round_trips(s in hfset_strategy()) {
        let text = s.to_string();
        prop_assert_eq!(text.parse::<HfSet>().unwrap(), s.clone());
        prop_assert_eq!(hfset::collapse(&hfset::encode_set(&s)).unwrap().value, s);
    }

    #[test]
    fn ackermann_order_agrees_with_naive_index(a in hfset_strategy(), b in hfset_strategy()) {
        prop_assume!(a.rank() <= 4 && b.rank() <= 4);
        let (na, nb) = (naive_index(&a), naive_index(&b));
        prop_assert_eq!(a.ack_index().unwrap(), BigUint::from(na));
        prop_assert_eq!(na == nb, a == b);
    }

    #[test]
    fn collapse_is_a_membership_isomorphism(a in wfev_strategy(10)) {
        let result = hfset::collapse(&a).unwrap();
        prop_assert_eq!(kit::naive_set(&result.value), kit::naive_realization(&a));
        for u in a.field() {
            for w in a.field() {
                prop_assert_eq!(a.contains_edge(u, w), result.xi[&w].contains(&result.xi[&u]));
            }
        }
        let back = hfset::encode_set(&result.value);
        prop_assert!(a.field().len() > 7 || kit::brute_isomorphic(&back, &a));
        prop_assert_eq!(digraph::canonicalize(&a).unwrap(), back);
    }

    #[test]
    fn collapse_is_injective_on_classes(a in wfev_strategy(7), b in wfev_strategy(7)) {
        let same = hfset::collapse(&a).unwrap().value == hfset::collapse(&b).unwrap().value;
        prop_assert_eq!(same, kit::brute_isomorphic(&a, &b));
    }

    #[test]
    fn membership_transports(a in wfev_strategy(8), b in wfev_strategy(6)) {
        let va = hfset::collapse(&a).unwrap().value;
        let vb = hfset::collapse(&b).unwrap().value;
        prop_assert_eq!(digraph::is_member(&b, &a).unwrap(), va.contains(&vb));
        for k in a.eln() {
            let cone = digraph::cone(&a, k).unwrap();
            prop_assert!(digraph::is_member(&cone, &a).unwrap());
        }
    }
}
