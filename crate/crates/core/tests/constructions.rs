use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wfesets::digraph::{self, Digraph, Node, PartialNodeMap};
use wfesets::hfset::{self, HfSet};
use wfesets_testkit as kit;

fn v3() -> Vec<HfSet> {
    hfset::v_level(3).unwrap().into_iter().collect()
}

fn value(a: &Digraph) -> HfSet {
    hfset::collapse(a).unwrap().value
}

fn wfev_strategy(max_nodes: usize) -> impl Strategy<Value = Digraph> {
    any::<u64>().prop_map(move |seed| kit::random_wfev(&mut ChaCha8Rng::seed_from_u64(seed), max_nodes))
}

#[test]
fn pairs_of_v3_members() {
    for s in v3() {
        for t in v3() {
            let (a, b) = (hfset::encode_set(&s), hfset::encode_set(&t));
            let p = digraph::pair(&a, &b).unwrap();
            assert_eq!(value(&p.digraph), HfSet::unordered_pair(s.clone(), t.clone()), "{s} {t}");
            assert_eq!(p.digraph.eln(), BTreeSet::from([p.a, p.b]));
            assert!(digraph::isomorphic(&digraph::cone(&p.digraph, p.a).unwrap(), &a).unwrap().is_some());
            assert!(digraph::isomorphic(&digraph::cone(&p.digraph, p.b).unwrap(), &b).unwrap().is_some());
        }
    }
}

#[test]
fn assemblies_of_short_lists() {
    let sets = v3();
    let mut lists: Vec<Vec<usize>> = vec![vec![]];
    for len in 1..=4 {
        lists.extend((0..len).map(|_| 0..sets.len()).multi_cartesian_product_vec());
    }
    for list in lists {
        let parts: Vec<Digraph> = list.iter().map(|&i| hfset::encode_set(&sets[i])).collect();
        let out = digraph::assemble(&parts).unwrap();
        let expected = HfSet::new(list.iter().map(|&i| sets[i].clone()));
        if list.is_empty() {
            assert!(out.digraph.is_empty());
            continue;
        }
        assert_eq!(value(&out.digraph), expected, "{list:?}");
        for (part, &k) in parts.iter().zip(&out.members) {
            assert_eq!(value(&digraph::cone(&out.digraph, k).unwrap()), value(part));
        }
    }
}

trait Product {
    fn multi_cartesian_product_vec(self) -> Vec<Vec<usize>>;
}

impl<I: Iterator<Item = std::ops::Range<usize>>> Product for I {
    fn multi_cartesian_product_vec(self) -> Vec<Vec<usize>> {
        self.fold(vec![vec![]], |acc, range| {
            acc.into_iter().flat_map(|prefix| range.clone().map(move |i| [prefix.clone(), vec![i]].concat())).collect()
        })
    }
}

// Every map from `dom` onto `cod`.
fn surjections(dom: &[Node], cod: &[Node]) -> Vec<PartialNodeMap> {
    let choices = (0..dom.len()).map(|_| 0..cod.len()).multi_cartesian_product_vec();
    choices
        .into_iter()
        .filter(|c| c.iter().copied().collect::<BTreeSet<_>>().len() == cod.len())
        .map(|c| dom.iter().copied().zip(c.into_iter().map(|i| cod[i])).collect())
        .collect()
}

#[test]
fn function_digraphs_realize_their_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut count = 0;
    let small: Vec<HfSet> = hfset::v_level(4).unwrap().into_iter().filter(|s| (1..=3).contains(&s.len())).collect();
    for s in &small {
        for t in small.iter().filter(|t| t.len() <= s.len()) {
            // Scatter the labels so the construction cannot rely on the
            // canonical numbering.
            let a = scramble(&hfset::encode_set(s), &mut rng);
            let b = scramble(&hfset::encode_set(t), &mut rng);
            let xa = hfset::collapse(&a).unwrap().xi;
            let xb = hfset::collapse(&b).unwrap().xi;
            let dom: Vec<Node> = a.eln().into_iter().collect();
            let cod: Vec<Node> = b.eln().into_iter().collect();
            for f in surjections(&dom, &cod) {
                let g = digraph::func_digraph(&a, &b, &f).unwrap();
                let expected = HfSet::new(f.iter().map(|(x, y)| HfSet::kuratowski(&xa[x], &xb[y])));
                assert_eq!(value(&g), expected);
                count += 1;
            }
        }
    }
    assert_eq!(count, 368);
}

#[test]
fn function_digraph_errors() {
    let two = digraph::encode_numeral(2);
    let one = digraph::encode_numeral(1);
    let not_onto: PartialNodeMap = BTreeMap::from([(0, 0), (2, 0)]);
    assert!(matches!(digraph::func_digraph(&two, &two, &not_onto), Err(digraph::DigraphError::NotSurjective(_))));
    let partial: PartialNodeMap = BTreeMap::from([(0, 0)]);
    assert!(matches!(digraph::func_digraph(&two, &one, &partial), Err(digraph::DigraphError::DomainMismatch(_))));
}

fn scramble(a: &Digraph, rng: &mut ChaCha8Rng) -> Digraph {
    use rand::seq::SliceRandom;
    let mut labels: Vec<Node> = (0..40).collect();
    labels.shuffle(rng);
    a.edges().map(|(j, k)| (labels[j as usize], labels[k as usize])).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn random_pairs_realize_unordered_pairs(a in wfev_strategy(6), b in wfev_strategy(6)) {
        let p = digraph::pair(&a, &b).unwrap();
        prop_assert!(digraph::validate(&p.digraph).is_wfev());
        prop_assert_eq!(value(&p.digraph), HfSet::unordered_pair(value(&a), value(&b)));
        // The first argument sits unchanged under `a`.
        prop_assert_eq!(digraph::cone(&p.digraph, p.a).unwrap(), a);
    }

    #[test]
    fn assembly_elements_are_the_parts(parts in prop::collection::vec(wfev_strategy(5), 1..5)) {
        let out = digraph::assemble(&parts).unwrap();
        let elements: BTreeSet<HfSet> =
            out.digraph.eln().into_iter().map(|k| value(&digraph::cone(&out.digraph, k).unwrap())).collect();
        let expected: BTreeSet<HfSet> = parts.iter().map(value).collect();
        prop_assert_eq!(elements, expected);
    }

    #[test]
    fn pair_closure_extends_without_moving_cones(a in wfev_strategy(5), limit in 1usize..3, depth in 0usize..3) {
        let b = digraph::pair_close_bounded(&a, limit, depth).unwrap();
        prop_assert!(digraph::validate(&b).is_wfev());
        let v = a.vertex().unwrap();
        prop_assert_eq!(b.vertex(), Some(v));
        for k in a.field() {
            if k != v {
                prop_assert_eq!(digraph::cone(&b, k).unwrap(), digraph::cone(&a, k).unwrap());
            }
        }
        if depth >= 1 {
            let inner: Vec<Node> = a.field().into_iter().filter(|&k| k != v).collect();
            for &k in &inner {
                prop_assert!(digraph::designator(&b, &BTreeSet::from([k])).is_some());
            }
        }
    }
}

#[test]
fn pair_closure_depth_zero_adds_transitive_edges() {
    let a = digraph::encode_numeral(2);
    let mut expected = a.clone();
    expected.insert(0, 4);
    assert_eq!(digraph::pair_close_bounded(&a, 1, 0).unwrap(), expected);
    let one = Digraph::from_edges([(0, 1)]);
    assert_eq!(value(&digraph::pair_close_bounded(&one, 1, 1).unwrap()), HfSet::von_neumann(2));
}
