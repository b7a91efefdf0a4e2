use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wfesets::coding;
use wfesets::digraph::{self, Digraph, Node, PartialNodeMap};
use wfesets::hfset;
use wfesets_testkit as kit;

fn wfev_strategy(max_nodes: usize) -> impl Strategy<Value = Digraph> {
    any::<u64>().prop_map(move |seed| kit::random_wfev(&mut ChaCha8Rng::seed_from_u64(seed), max_nodes))
}

fn wfev(a: &Digraph) -> bool {
    digraph::validate(a).is_wfev()
}

fn identity_on(a: &Digraph) -> PartialNodeMap {
    a.field().into_iter().map(|u| (u, u)).collect()
}

#[test]
fn self_map_is_identity_on_small_classes() {
    for a in kit::all_wfev_up_to_iso(5) {
        assert_eq!(digraph::hom_map(&a, &a).unwrap(), identity_on(&a));
    }
}

#[test]
fn validate_matches_naive_class_on_random_digraphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2000 {
        let a = kit::random_digraph(&mut rng, 5, 5);
        assert_eq!(wfev(&a), kit::naive_is_wfev(&a), "{a:?}");
    }
}

#[test]
fn designators_are_unique_and_exact() {
    for a in kit::all_wfev_up_to_iso(5) {
        for u in a.field() {
            let ext = a.extension(u);
            assert_eq!(digraph::designator(&a, &ext), Some(u));
        }
    }
}

#[test]
fn numerals_realize_their_order() {
    for n in 0..=5u64 {
        for k in 0..=5u64 {
            let member = digraph::is_member(&digraph::encode_numeral(k), &digraph::encode_numeral(n)).unwrap();
            assert_eq!(member, k < n, "{k} in {n}");
        }
    }
}

#[test]
fn natsets_realize_their_members() {
    for mask in 0u32..32 {
        let x: BTreeSet<u64> = (0..5).filter(|i| mask >> i & 1 == 1).collect();
        let d = digraph::encode_natset(&x);
        let value = hfset::collapse(&d).unwrap().value;
        let naturals: BTreeSet<usize> = value.iter().map(|e| e.as_natural().unwrap()).collect();
        assert_eq!(naturals, x.iter().map(|&k| k as usize).collect());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distinct_nodes_have_distinct_cones(a in wfev_strategy(9)) {
        let field: Vec<Node> = a.field().into_iter().collect();
        for (i, &u) in field.iter().enumerate() {
            for &v in &field[i + 1..] {
                let cu = digraph::cone(&a, u).unwrap();
                let cv = digraph::cone(&a, v).unwrap();
                prop_assert!(digraph::isomorphic(&cu, &cv).unwrap().is_none());
            }
        }
    }

    #[test]
    fn hom_maps_are_mutually_inverse(a in wfev_strategy(8), b in wfev_strategy(8)) {
        let ab = digraph::hom_map(&a, &b).unwrap();
        let ba = digraph::hom_map(&b, &a).unwrap();
        let inverse: PartialNodeMap = ab.iter().map(|(&u, &v)| (v, u)).collect();
        prop_assert_eq!(ba, inverse);
        // Domain is closed downward.
        for &u in ab.keys() {
            for p in a.extension(u) {
                prop_assert!(ab.contains_key(&p));
            }
        }
    }

    #[test]
    fn isomorphism_agrees_with_brute_force(a in wfev_strategy(6), b in wfev_strategy(6)) {
        let iso = digraph::isomorphic(&a, &b).unwrap();
        prop_assert_eq!(iso.is_some(), kit::brute_isomorphic(&a, &b));
        prop_assert_eq!(iso.is_some(), digraph::canonicalize(&a).unwrap() == digraph::canonicalize(&b).unwrap());
        if let Some(w) = iso {
            prop_assert_eq!(digraph::bij_image(&a, &w).unwrap(), b);
        }
    }

    #[test]
    fn relabelled_copies_are_isomorphic(a in wfev_strategy(8), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut labels: Vec<Node> = (100..200).collect();
        labels.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let f: PartialNodeMap = a.field().into_iter().zip(labels).collect();
        let b = digraph::bij_image(&a, &f).unwrap();
        prop_assert_eq!(digraph::validate(&b), {
            let mut c = digraph::validate(&a);
            c.vertex = c.vertex.map(|v| f[&v]);
            c.min_node = c.min_node.map(|v| f[&v]);
            c
        });
        prop_assert_eq!(digraph::isomorphic(&a, &b).unwrap(), Some(f));
    }

    #[test]
    fn cones_are_wfev_with_their_top(a in wfev_strategy(9)) {
        let min = digraph::validate(&a).min_node.unwrap();
        for c in a.field() {
            let cone = digraph::cone(&a, c).unwrap();
            if c == min {
                prop_assert!(cone.is_empty());
            } else {
                prop_assert!(wfev(&cone));
                prop_assert_eq!(cone.vertex(), Some(c));
            }
        }
    }

    #[test]
    fn multi_restriction_keeps_elements_and_cones(a in wfev_strategy(9), mask in any::<u64>()) {
        let v = a.vertex().unwrap();
        let candidates: Vec<Node> = a.field().into_iter().filter(|&u| u != v).collect();
        let mut x: BTreeSet<Node> = candidates.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &u)| u).collect();
        if x.is_empty() {
            x.insert(candidates[0]);
        }
        let b = digraph::multi_restrict(&a, &x).unwrap();
        prop_assert!(wfev(&b));
        prop_assert_eq!(b.vertex(), Some(v));
        prop_assert_eq!(b.eln(), x);
        for k in b.field() {
            if k != v {
                prop_assert_eq!(digraph::cone(&b, k).unwrap(), digraph::cone(&a, k).unwrap());
            }
        }
    }

    #[test]
    fn packed_slices_recover_the_digraph(edges in prop::collection::btree_set((0u64..50, 0u64..50), 0..20), n in 0u64..4) {
        let a: Digraph = edges.into_iter().collect();
        let f: PartialNodeMap = a.field().into_iter().map(|u| (u, coding::pair(n, u).unwrap())).collect();
        let packed = digraph::bij_image(&a, &f).unwrap();
        prop_assert_eq!(digraph::slice(&packed, n), a.clone());
        prop_assert!(digraph::slice(&packed, n + 1).is_empty());
    }

    #[test]
    fn bottom_up_predicates_reach_every_node(a in wfev_strategy(10)) {
        // The predicate "rank is defined": a node gets a rank once all of its
        // elements have one. Every node must end up ranked.
        let mut rank: std::collections::BTreeMap<Node, usize> = Default::default();
        let preds = a.predecessors();
        loop {
            let ready: Vec<(Node, usize)> = a
                .field()
                .into_iter()
                .filter(|u| !rank.contains_key(u))
                .filter_map(|u| {
                    let ps = preds.get(&u).cloned().unwrap_or_default();
                    ps.iter().all(|p| rank.contains_key(p)).then(|| (u, ps.iter().map(|p| rank[p] + 1).max().unwrap_or(0)))
                })
                .collect();
            if ready.is_empty() {
                break;
            }
            rank.extend(ready);
        }
        prop_assert_eq!(rank.len(), a.field().len());
        let xi = hfset::collapse(&a).unwrap().xi;
        for (u, r) in rank {
            prop_assert_eq!(xi[&u].rank() as usize, r);
        }
    }

    #[test]
    fn text_and_json_round_trip(edges in prop::collection::btree_set((0u64..1000, 0u64..1000), 0..30)) {
        let a: Digraph = edges.into_iter().collect();
        prop_assert_eq!(Digraph::parse(&a.to_text()).unwrap(), a.clone());
        prop_assert_eq!(Digraph::parse(&a.to_json().to_string()).unwrap(), a);
    }
}
