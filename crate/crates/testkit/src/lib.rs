//! Oracles and generators for tests. Nothing here calls the collapse,
//! canonical form, or isomorphism code of `wfesets`; each oracle recomputes
//! its answer from scratch in the most direct way available.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use wfesets::digraph::{Digraph, Node};
use wfesets::formula::{Formula, Term, Var};
use wfesets::hfset::HfSet;

/// Set value of each node written as a string: `{}` for a node without
/// elements, otherwise the sorted, deduplicated strings of its elements in
/// braces. Assumes an acyclic digraph.
pub fn naive_values(a: &Digraph) -> BTreeMap<Node, String> {
    fn value(u: Node, preds: &BTreeMap<Node, Vec<Node>>, memo: &mut BTreeMap<Node, String>) -> String {
        if let Some(s) = memo.get(&u) {
            return s.clone();
        }
        let mut parts: Vec<String> = preds[&u].iter().map(|&p| value(p, preds, memo)).collect();
        parts.sort();
        parts.dedup();
        let s = format!("{{{}}}", parts.join(","));
        memo.insert(u, s.clone());
        s
    }
    let mut preds: BTreeMap<Node, Vec<Node>> = BTreeMap::new();
    for (j, k) in a.edges() {
        preds.entry(j).or_default();
        preds.entry(k).or_default().push(j);
    }
    let mut memo = BTreeMap::new();
    for &u in preds.keys() {
        value(u, &preds, &mut memo);
    }
    memo
}

/// String value of a set in the same format as [`naive_values`].
pub fn naive_set(s: &HfSet) -> String {
    let mut parts: Vec<String> = s.iter().map(naive_set).collect();
    parts.sort();
    format!("{{{}}}", parts.join(","))
}

/// Value of the node with the most elements below it, i.e. the vertex of a
/// WFEV digraph; `{}` for the empty digraph.
pub fn naive_realization(a: &Digraph) -> String {
    let values = naive_values(a);
    let mut below: BTreeMap<Node, BTreeSet<Node>> = BTreeMap::new();
    for &u in values.keys() {
        let mut seen = BTreeSet::from([u]);
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            for (j, k) in a.edges() {
                if k == x && seen.insert(j) {
                    stack.push(j);
                }
            }
        }
        below.insert(u, seen);
    }
    match below.iter().max_by_key(|(_, s)| s.len()) {
        Some((u, _)) => values[u].clone(),
        None => "{}".to_string(),
    }
}

/// Whether some bijection between the fields maps edges exactly onto edges.
pub fn brute_isomorphic(a: &Digraph, b: &Digraph) -> bool {
    let fa: Vec<Node> = a.field().into_iter().collect();
    let fb: Vec<Node> = b.field().into_iter().collect();
    if fa.len() != fb.len() || a.edge_count() != b.edge_count() {
        return false;
    }
    fb.iter().copied().permutations(fb.len()).any(|image| {
        let f: HashMap<Node, Node> = fa.iter().copied().zip(image).collect();
        a.edges().all(|(j, k)| b.contains_edge(f[&j], f[&k]))
    })
}

/// Whether the digraph is acyclic with pairwise distinct in-neighbour sets and
/// a node below which every node lies. Computed directly from the edges.
pub fn naive_is_wfev(a: &Digraph) -> bool {
    let field: Vec<Node> = a.field().into_iter().collect();
    if field.is_empty() {
        return true;
    }
    // Acyclic: repeatedly strip nodes without incoming edges from the rest.
    let mut left: BTreeSet<Node> = field.iter().copied().collect();
    loop {
        let free: Vec<Node> = left.iter().copied().filter(|&u| !a.edges().any(|(j, k)| k == u && left.contains(&j))).collect();
        if free.is_empty() {
            break;
        }
        for u in free {
            left.remove(&u);
        }
    }
    if !left.is_empty() {
        return false;
    }
    let exts: Vec<BTreeSet<Node>> =
        field.iter().map(|&u| a.edges().filter(|e| e.1 == u).map(|e| e.0).collect()).collect();
    if exts.iter().unique().count() != exts.len() {
        return false;
    }
    field.iter().filter(|&&u| reach_below(a, u).len() == field.len()).count() == 1
}

fn reach_below(a: &Digraph, u: Node) -> BTreeSet<Node> {
    let mut seen = BTreeSet::from([u]);
    let mut stack = vec![u];
    while let Some(x) = stack.pop() {
        for (j, k) in a.edges() {
            if k == x && seen.insert(j) {
                stack.push(j);
            }
        }
    }
    seen
}

/// Builds a digraph from extension lists: node `i` has the elements `exts[i]`
/// (indices of earlier nodes).
pub fn from_extensions(exts: &[Vec<usize>]) -> Digraph {
    let mut out = Digraph::new();
    for (k, ext) in exts.iter().enumerate() {
        for &j in ext {
            out.insert(j as Node, k as Node);
        }
    }
    out
}

/// One WFEV digraph per isomorphism class with at most `max_nodes` nodes,
/// the empty digraph included. Classes are told apart by [`naive_realization`].
pub fn all_wfev_up_to_iso(max_nodes: usize) -> Vec<Digraph> {
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut out = vec![Digraph::new()];
    seen.insert("{}".to_string());
    let mut exts: Vec<Vec<usize>> = vec![Vec::new()];
    extend_classes(&mut exts, max_nodes, &mut seen, &mut out);
    out
}

fn extend_classes(exts: &mut Vec<Vec<usize>>, max_nodes: usize, seen: &mut BTreeSet<String>, out: &mut Vec<Digraph>) {
    if exts.len() >= 2 {
        let d = from_extensions(exts);
        // The newest node must be the vertex: every node lies below it.
        if reach_below(&d, (exts.len() - 1) as Node).len() == exts.len() {
            let value = naive_realization(&d);
            if seen.insert(value) {
                out.push(d);
            }
        }
    }
    if exts.len() == max_nodes {
        return;
    }
    let n = exts.len();
    for mask in 0u32..1 << n {
        let ext: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if exts.contains(&ext) {
            continue;
        }
        exts.push(ext);
        extend_classes(exts, max_nodes, seen, out);
        exts.pop();
    }
}

/// Random WFEV digraph with at most `max_nodes` nodes (at least 2), labels
/// scattered over `0..4 * max_nodes`.
pub fn random_wfev(rng: &mut impl Rng, max_nodes: usize) -> Digraph {
    let target = rng.gen_range(2..=max_nodes.max(2));
    let mut exts: Vec<Vec<usize>> = vec![Vec::new()];
    let mut attempts = 0;
    while exts.len() < target - 1 && attempts < 200 {
        attempts += 1;
        let n = exts.len();
        let ext: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
        if !exts.contains(&ext) {
            exts.push(ext);
        }
    }
    // Put a vertex on top of every node that is no one's element.
    let used: BTreeSet<usize> = exts.iter().flatten().copied().collect();
    let tops: Vec<usize> = (0..exts.len()).filter(|i| !used.contains(i)).collect();
    if tops.len() > 1 || exts.len() == 1 {
        exts.push(tops);
    }
    let d = from_extensions(&exts);
    let mut labels: Vec<Node> = (0..(4 * max_nodes.max(2)) as Node).collect();
    labels.shuffle(rng);
    d.edges().map(|(j, k)| (labels[j as usize], labels[k as usize])).collect()
}

/// Random digraph over nodes `0..nodes`, any shape.
pub fn random_digraph(rng: &mut impl Rng, nodes: u64, edges: usize) -> Digraph {
    (0..edges).map(|_| (rng.gen_range(0..nodes), rng.gen_range(0..nodes))).collect()
}

/// Members of `V_n` for `n ≤ 4`, rebuilt by iterated powerset on sorted
/// string sets.
pub fn naive_level(n: usize) -> BTreeSet<String> {
    let mut level: Vec<String> = Vec::new();
    for _ in 0..n {
        let mut next = Vec::new();
        for mask in 0u32..1 << level.len() {
            let mut parts: Vec<String> =
                level.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s.clone()).collect();
            parts.sort();
            next.push(format!("{{{}}}", parts.join(",")));
        }
        level = next;
    }
    level.into_iter().collect()
}

/// Random formula of depth at most `depth` over the variables `0..vars`.
/// Atoms draw terms from the variables and from `consts`.
pub fn random_formula(rng: &mut impl Rng, depth: usize, vars: Var, consts: &[HfSet]) -> Formula {
    let term = |rng: &mut dyn rand::RngCore| -> Term {
        if !consts.is_empty() && rng.gen_bool(0.25) {
            Term::Const(consts[rng.gen_range(0..consts.len())].clone())
        } else {
            Term::Var(rng.gen_range(0..vars))
        }
    };
    if depth == 0 || rng.gen_bool(0.2) {
        let (a, b) = (term(rng), term(rng));
        return if rng.gen_bool(0.5) { Formula::member(a, b) } else { Formula::equal(a, b) };
    }
    match rng.gen_range(0..3) {
        0 => random_formula(rng, depth - 1, vars, consts).not(),
        1 => random_formula(rng, depth - 1, vars, consts).and(random_formula(rng, depth - 1, vars, consts)),
        _ => Formula::exists(rng.gen_range(0..vars), random_formula(rng, depth - 1, vars, consts)),
    }
}

/// Random closed formula: a random formula with its free variables bound by
/// existential or universal quantifiers.
pub fn random_sentence(rng: &mut impl Rng, depth: usize, vars: Var, consts: &[HfSet]) -> Formula {
    let mut f = random_formula(rng, depth, vars, consts);
    for v in f.free_vars() {
        f = if rng.gen_bool(0.5) { Formula::exists(v, f) } else { Formula::forall(v, f) };
    }
    f
}

/// Every parameter-free formula with exactly `size` symbols over the variables
/// `0..vars` (atoms 2, `¬` and `∧` 1, `∃v` 2).
pub fn all_formulas(size: usize, vars: Var) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); size + 1];
    for s in 2..=size {
        let mut here = Vec::new();
        if s == 2 {
            for a in 0..vars {
                for b in 0..vars {
                    here.push(Formula::member(Term::Var(a), Term::Var(b)));
                    here.push(Formula::equal(Term::Var(a), Term::Var(b)));
                }
            }
        }
        for f in &by_size[s - 1] {
            here.push(f.clone().not());
        }
        for left in 2..s {
            let right = s - 1 - left;
            if right < 2 {
                continue;
            }
            for p in &by_size[left] {
                for q in &by_size[right] {
                    here.push(p.clone().and(q.clone()));
                }
            }
        }
        if s >= 4 {
            for f in &by_size[s - 2] {
                for v in 0..vars {
                    here.push(Formula::exists(v, f.clone()));
                }
            }
        }
        by_size[s] = here;
    }
    by_size.swap_remove(size)
}

/// Counts the sets of closed instances satisfying the four truth-set
/// conditions by a search that branches on every instance. Instances are
/// visited by increasing size, so each condition can be checked as soon as
/// its instance is decided. Returns the count and the last set found.
pub fn search_truth_sets(x: &BTreeSet<HfSet>, instances: &BTreeSet<Formula>) -> (usize, BTreeSet<Formula>) {
    let mut order: Vec<&Formula> = instances.iter().collect();
    order.sort_by_key(|f| f.symbol_count());
    let mut decided: HashMap<&Formula, bool> = HashMap::new();
    let mut found = (0, BTreeSet::new());
    search(x, &order, 0, &mut decided, &mut found);
    found
}

fn consistent(x: &BTreeSet<HfSet>, f: &Formula, value: bool, decided: &HashMap<&Formula, bool>) -> bool {
    let get = |g: &Formula| *decided.get(g).expect("smaller instances are decided");
    let constant = |t: &Term| match t {
        Term::Const(s) => s.clone(),
        _ => panic!("instances are closed"),
    };
    let expected = match f {
        Formula::In(a, b) => constant(b).contains(&constant(a)),
        Formula::Eq(a, b) => constant(a) == constant(b),
        Formula::Not(p) => !get(p),
        Formula::And(p, q) => get(p) && get(q),
        Formula::Exists(v, p) => x.iter().any(|c| get(&p.substitute_var(*v, &Term::Const(c.clone())))),
    };
    expected == value
}

fn search<'a>(
    x: &BTreeSet<HfSet>,
    order: &[&'a Formula],
    at: usize,
    decided: &mut HashMap<&'a Formula, bool>,
    found: &mut (usize, BTreeSet<Formula>),
) {
    let Some(&f) = order.get(at) else {
        found.0 += 1;
        found.1 = decided.iter().filter(|(_, v)| **v).map(|(f, _)| (*f).clone()).collect();
        return;
    };
    for value in [false, true] {
        if consistent(x, f, value, decided) {
            decided.insert(f, value);
            search(x, order, at + 1, decided, found);
            decided.remove(f);
        }
    }
}

/// All transitive subsets of the family `x`.
pub fn transitive_subfamilies(x: &BTreeSet<HfSet>) -> Vec<BTreeSet<HfSet>> {
    let members: Vec<&HfSet> = x.iter().collect();
    (0u64..1 << members.len())
        .map(|mask| members.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| (*s).clone()).collect())
        .filter(|fam: &BTreeSet<HfSet>| fam.iter().all(|s| s.iter().all(|e| fam.contains(e))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn naive_values_of_two() {
        let two = Digraph::from_edges([(0, 2), (0, 4), (2, 4)]);
        assert_eq!(naive_realization(&two), "{{{}},{}}");
        assert!(naive_is_wfev(&two));
        assert!(!naive_is_wfev(&Digraph::from_edges([(0, 0)])));
        assert!(!naive_is_wfev(&Digraph::from_edges([(0, 2), (1, 2)])));
    }

    #[test]
    fn class_counts() {
        // Sets x with |TC(x) ∪ {x}| ≤ n, counted by hand.
        let counts: Vec<usize> = (1..=4).map(|n| all_wfev_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 12]);
    }

    #[test]
    fn generated_digraphs_are_wfev() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for _ in 0..200 {
            let d = random_wfev(&mut rng, 10);
            assert!(naive_is_wfev(&d), "{d:?}");
            assert!(d.field().len() <= 10);
        }
    }

    #[test]
    fn naive_level_sizes() {
        let sizes: Vec<usize> = (0..=4).map(|n| naive_level(n).len()).collect();
        assert_eq!(sizes, vec![0, 1, 2, 4, 16]);
    }

    #[test]
    fn formula_counts() {
        assert_eq!(all_formulas(2, 2).len(), 8);
        assert_eq!(all_formulas(3, 2).len(), 8);
        assert_eq!(all_formulas(4, 2).len(), 8 + 16);
    }
}
