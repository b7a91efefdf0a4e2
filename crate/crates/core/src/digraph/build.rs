//! Digraph constructions: pairing, slices, assembly, function digraphs,
//! bounded pair-closure, and the encodings of naturals and sets of naturals.

use std::collections::{BTreeSet, HashMap};

use crate::coding;

use super::{
    bij_image, check_wfev, hom_map, multi_restrict_unchecked, Digraph, DigraphError, Node,
    PartialNodeMap,
};

/// Smallest natural outside every given field.
fn fresh_node(fields: &[&BTreeSet<Node>]) -> Node {
    (0..).find(|n| fields.iter().all(|f| !f.contains(n))).expect("naturals are unbounded")
}

/// The `i`-th natural (from 0) not in `taken`.
fn nth_outside(taken: &BTreeSet<Node>, i: Node) -> Node {
    let mut x = i;
    for &t in taken {
        if t <= x {
            x += 1;
        } else {
            break;
        }
    }
    x
}

/// Output of [`pair`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairResult {
    pub digraph: Digraph,
    /// Element of the vertex whose cone is the first argument (with equality
    /// when the first argument is nonempty).
    pub a: Node,
    /// Element of the vertex whose cone is isomorphic to the second argument.
    pub b: Node,
    /// Where each field node of the second argument ended up.
    pub b_map: PartialNodeMap,
}

/// A WFEV digraph `P` with `Eln P = {a, b}`, `Con_P a = A` and `Con_P b ≅ B`,
/// so that `P` codes `{|A|, |B|}`.
///
/// The first argument keeps its labels. When it is nonempty the second is moved
/// onto `g(k) = j_{2k}`, `j_0 < j_1 < …` enumerating the naturals outside the
/// first field; cones of `B` already present in `A` are then identified with
/// their copies in `A` through `H_BA`, and a fresh vertex is added on top.
pub fn pair(a: &Digraph, b: &Digraph) -> Result<PairResult, DigraphError> {
    check_wfev(a)?;
    check_wfev(b)?;
    if a.is_empty() && b.is_empty() {
        return Ok(PairResult {
            digraph: Digraph::from_edges([(0, 1)]),
            a: 0,
            b: 0,
            b_map: PartialNodeMap::new(),
        });
    }
    if a.is_empty() {
        let (top, bottom, digraph) = attach_empty(b);
        let b_map = b.field().into_iter().map(|k| (k, k)).collect();
        return Ok(PairResult { digraph, a: bottom, b: top, b_map });
    }
    if b.is_empty() {
        let (top, bottom, digraph) = attach_empty(a);
        return Ok(PairResult { digraph, a: top, b: bottom, b_map: PartialNodeMap::new() });
    }

    let field_a = a.field();
    let mut g = PartialNodeMap::new();
    for k in b.field() {
        let slot = k.checked_mul(2).ok_or(DigraphError::NodeOverflow)?;
        g.insert(k, nth_outside(&field_a, slot));
    }
    let shifted = bij_image(b, &g)?;
    let h_ba = hom_map(&shifted, a)?;
    let h: PartialNodeMap = shifted.field().into_iter().map(|v| (v, h_ba.get(&v).copied().unwrap_or(v))).collect();
    let identified = bij_image(&shifted, &h)?;
    let mut q = a.union(&identified);

    let top = fresh_node(&[&q.field()]);
    let va = a.vertex().expect("nonempty WFEV");
    let vb = h[&g[&b.vertex().expect("nonempty WFEV")]];
    q.insert(va, top);
    q.insert(vb, top);
    let b_map = g.iter().map(|(&k, gk)| (k, h[gk])).collect();
    Ok(PairResult { digraph: q, a: va, b: vb, b_map })
}

// `A ∪ {(ver A, p), (min A, p)}` for fresh `p`; returns (ver A, min A, digraph).
fn attach_empty(a: &Digraph) -> (Node, Node, Digraph) {
    let v = a.vertex().expect("nonempty WFEV");
    let m = *a.predecessors().iter().find(|(_, p)| p.is_empty()).expect("WFE has a minimum").0;
    let p = fresh_node(&[&a.field()]);
    let mut out = a.clone();
    out.insert(v, p);
    out.insert(m, p);
    (v, m, out)
}

/// `(A)_n = {(j, k) : (<n,j>, <n,k>) ∈ A}`.
pub fn slice(a: &Digraph, n: u64) -> Digraph {
    a.edges()
        .filter_map(|(x, y)| {
            let (nx, j) = coding::unpair(x);
            let (ny, k) = coding::unpair(y);
            (nx == n && ny == n).then_some((j, k))
        })
        .collect()
}

/// Output of [`assemble`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssembleResult {
    pub digraph: Digraph,
    /// For each input, the element of the vertex whose cone is isomorphic to it.
    pub members: Vec<Node>,
}

/// A WFEV digraph whose vertex elements code exactly the given digraphs.
///
/// Chains [`pair`] so that each stage sits unchanged inside the next, then
/// collects the designated nodes under a fresh vertex. The empty list gives the
/// empty digraph.
pub fn assemble(parts: &[Digraph]) -> Result<AssembleResult, DigraphError> {
    for p in parts {
        check_wfev(p)?;
    }
    let Some(first) = parts.first() else {
        return Ok(AssembleResult { digraph: Digraph::new(), members: Vec::new() });
    };
    let second = parts.get(1).unwrap_or(first);
    let start = pair(first, second)?;
    let mut members = vec![start.a];
    if parts.len() > 1 {
        members.push(start.b);
    }
    let mut chain = start.digraph;
    for part in parts.iter().skip(2) {
        let step = pair(&chain, part)?;
        members.push(step.b);
        chain = step.digraph;
    }
    let top = fresh_node(&[&chain.field()]);
    let selection: BTreeSet<Node> = members.iter().copied().collect();
    Ok(AssembleResult { digraph: multi_restrict_unchecked(&chain, &selection, top), members })
}

/// Node whose extension is exactly `set`, if any.
pub fn designator(a: &Digraph, set: &BTreeSet<Node>) -> Option<Node> {
    a.predecessors()
        .into_iter()
        .find(|(_, p)| p.len() == set.len() && p.iter().all(|x| set.contains(x)))
        .map(|(u, _)| u)
}

/// `Ŝ{Ŝ{j,j}, Ŝ{j,k}}`, the node coding the Kuratowski pair of `j` and `k`.
pub fn kuratowski_node(a: &Digraph, j: Node, k: Node) -> Option<Node> {
    let single = designator(a, &BTreeSet::from([j]))?;
    let double = designator(a, &BTreeSet::from([j, k]))?;
    designator(a, &BTreeSet::from([single, double]))
}

/// Incremental designator bookkeeping for a WFEV digraph whose vertex already
/// has every other node as an element.
struct Closure {
    digraph: Digraph,
    vertex: Node,
    field: BTreeSet<Node>,
    by_extension: HashMap<BTreeSet<Node>, Node>,
}

impl Closure {
    /// Adds `(field \ {v}) × {v}`.
    fn new(a: &Digraph) -> Closure {
        let vertex = a.vertex().expect("nonempty WFEV");
        let mut digraph = a.clone();
        let field = a.field();
        for &u in &field {
            if u != vertex {
                digraph.insert(u, vertex);
            }
        }
        let by_extension = digraph
            .predecessors()
            .into_iter()
            .filter(|(u, _)| *u != vertex)
            .map(|(u, p)| (p.into_iter().collect(), u))
            .collect();
        Closure { digraph, vertex, field, by_extension }
    }

    fn non_vertex_nodes(&self) -> Vec<Node> {
        self.field.iter().copied().filter(|&u| u != self.vertex).collect()
    }

    /// Non-vertex node with extension `set`, adding a fresh one if needed.
    fn ensure(&mut self, set: &BTreeSet<Node>) -> Node {
        if let Some(&k) = self.by_extension.get(set) {
            return k;
        }
        let k = fresh_node(&[&self.field]);
        for &j in set {
            self.digraph.insert(j, k);
        }
        self.digraph.insert(k, self.vertex);
        self.field.insert(k);
        self.by_extension.insert(set.clone(), k);
        k
    }
}

/// `depth` rounds of the pair-closure step: every nonempty set of at most
/// `subset_size_limit` non-vertex nodes without a designator gets a fresh
/// node, and every node becomes an element of the vertex. Old non-vertex
/// cones are unchanged.
pub fn pair_close_bounded(a: &Digraph, subset_size_limit: usize, depth: usize) -> Result<Digraph, DigraphError> {
    check_wfev(a)?;
    if a.is_empty() {
        return Ok(Digraph::new());
    }
    let mut closure = Closure::new(a);
    for _ in 0..depth {
        let nodes = closure.non_vertex_nodes();
        let before = closure.field.len();
        let mut chosen = Vec::new();
        close_subsets(&mut closure, &nodes, 0, subset_size_limit, &mut chosen);
        if closure.field.len() == before {
            break;
        }
    }
    Ok(closure.digraph)
}

fn close_subsets(closure: &mut Closure, nodes: &[Node], from: usize, limit: usize, chosen: &mut Vec<Node>) {
    if chosen.len() == limit {
        return;
    }
    for i in from..nodes.len() {
        chosen.push(nodes[i]);
        closure.ensure(&chosen.iter().copied().collect());
        close_subsets(closure, nodes, i + 1, limit, chosen);
        chosen.pop();
    }
}

/// A WFEV digraph coding the function `{(|Con_A x|, |Con_B f(x)|) : x ∈ Eln A}`
/// as a set of Kuratowski pairs. `f` must map `Eln A` onto `Eln B`.
pub fn func_digraph(a: &Digraph, b: &Digraph, f: &PartialNodeMap) -> Result<Digraph, DigraphError> {
    check_wfev(a)?;
    check_wfev(b)?;
    let dom = a.eln();
    let cod = b.eln();
    if let Some(&x) = f.keys().find(|x| !dom.contains(x)) {
        return Err(DigraphError::DomainMismatch(x));
    }
    if let Some(&x) = dom.iter().find(|x| !f.contains_key(x)) {
        return Err(DigraphError::DomainMismatch(x));
    }
    if let Some(&y) = f.values().find(|y| !cod.contains(y)) {
        return Err(DigraphError::DomainMismatch(y));
    }
    let range: BTreeSet<Node> = f.values().copied().collect();
    if let Some(&y) = cod.iter().find(|y| !range.contains(y)) {
        return Err(DigraphError::NotSurjective(y));
    }
    if dom.is_empty() {
        return Ok(Digraph::new());
    }

    let paired = pair(a, b)?;
    let mut closure = Closure::new(&paired.digraph);
    let mut graph_nodes = BTreeSet::new();
    for (&x, y) in f {
        let y = paired.b_map[y];
        let single = closure.ensure(&BTreeSet::from([x]));
        let double = closure.ensure(&BTreeSet::from([x, y]));
        graph_nodes.insert(closure.ensure(&BTreeSet::from([single, double])));
    }
    let vertex = closure.vertex;
    Ok(multi_restrict_unchecked(&closure.digraph, &graph_nodes, vertex))
}

/// `n̂ = {(2j, 2k) : j < k ≤ n}`, coding the von Neumann natural `n`.
pub fn encode_numeral(n: u64) -> Digraph {
    let mut out = Digraph::new();
    for k in 1..=n {
        for j in 0..k {
            out.insert(2 * j, 2 * k);
        }
    }
    out
}

/// `x̌`, coding `{k : k ∈ x}` with each `k` von Neumann: the numeral chain up to
/// `max x` with every `k ∈ x` pointing at node `1`.
pub fn encode_natset(x: &BTreeSet<u64>) -> Digraph {
    let Some(&top) = x.iter().next_back() else {
        return Digraph::new();
    };
    let mut out = encode_numeral(top);
    for &k in x {
        out.insert(2 * k, 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{cone, isomorphic, validate};
    use crate::hfset::{collapse, HfSet};

    fn g(edges: &[(Node, Node)]) -> Digraph {
        Digraph::from_edges(edges.iter().copied())
    }

    fn value(a: &Digraph) -> HfSet {
        collapse(a).unwrap().value
    }

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn nth_outside_skips_taken() {
        let taken = set(&[0, 1, 3, 7]);
        let firsts: Vec<Node> = (0..6).map(|i| nth_outside(&taken, i)).collect();
        assert_eq!(firsts, vec![2, 4, 5, 6, 8, 9]);
    }

    #[test]
    fn pair_of_empties() {
        let p = pair(&Digraph::new(), &Digraph::new()).unwrap();
        assert_eq!(p.digraph, g(&[(0, 1)]));
        assert_eq!((p.a, p.b), (0, 0));
    }

    #[test]
    fn pair_with_one_empty() {
        let a = encode_numeral(2);
        let p = pair(&Digraph::new(), &a).unwrap();
        assert_eq!(p.digraph, g(&[(0, 2), (0, 4), (2, 4), (4, 1), (0, 1)]));
        assert_eq!((p.a, p.b), (0, 4));
        let q = pair(&a, &Digraph::new()).unwrap();
        assert_eq!((q.a, q.b), (4, 0));
        assert_eq!(value(&q.digraph), HfSet::new([HfSet::von_neumann(2), HfSet::empty()]));
    }

    #[test]
    fn pair_main_case() {
        let one = encode_numeral(1);
        let two = encode_numeral(2);
        let p = pair(&one, &two).unwrap();
        assert!(validate(&p.digraph).is_wfev());
        assert_eq!(value(&p.digraph), HfSet::new([HfSet::von_neumann(1), HfSet::von_neumann(2)]));
        assert_eq!(cone(&p.digraph, p.a).unwrap(), one);
        assert!(isomorphic(&cone(&p.digraph, p.b).unwrap(), &two).unwrap().is_some());
        assert_eq!(p.digraph.eln(), set(&[p.a, p.b]));
        // Every node of B lands somewhere in P.
        assert_eq!(p.b_map.len(), two.field().len());
    }

    #[test]
    fn pair_of_equal_sets_merges() {
        let two = encode_numeral(2);
        let p = pair(&two, &two).unwrap();
        assert_eq!(p.a, p.b);
        assert_eq!(value(&p.digraph), HfSet::singleton(HfSet::von_neumann(2)));
    }

    #[test]
    fn slice_examples() {
        assert_eq!(slice(&encode_numeral(2), 0), g(&[(0, 1), (0, 2), (1, 2)]));
        assert_eq!(slice(&Digraph::new(), 3), Digraph::new());
        assert_eq!(slice(&g(&[(1, 5)]), 1), g(&[(0, 1)]));
        assert_eq!(slice(&g(&[(1, 5)]), 0), Digraph::new());
    }

    #[test]
    fn assemble_examples() {
        let r = assemble(&[Digraph::new()]).unwrap();
        assert_eq!(value(&r.digraph), HfSet::singleton(HfSet::empty()));
        let r = assemble(&[encode_numeral(1), encode_numeral(2)]).unwrap();
        assert_eq!(value(&r.digraph), HfSet::new([HfSet::von_neumann(1), HfSet::von_neumann(2)]));
        let r = assemble(&[Digraph::new(), Digraph::new()]).unwrap();
        assert_eq!(value(&r.digraph), HfSet::singleton(HfSet::empty()));
        assert_eq!(r.members[0], r.members[1]);
        assert_eq!(assemble(&[]).unwrap().digraph, Digraph::new());
        assert_eq!(assemble(&[g(&[(0, 0)])]).unwrap_err().code(), "NOT_WF");
    }

    #[test]
    fn designator_examples() {
        let two = encode_numeral(2);
        assert_eq!(designator(&two, &set(&[0])), Some(2));
        assert_eq!(designator(&two, &set(&[0, 2])), Some(4));
        assert_eq!(designator(&two, &set(&[2])), None);
        assert_eq!(designator(&two, &set(&[])), Some(0));
        // <0,0> = {{0}} has no node here.
        assert_eq!(kuratowski_node(&two, 0, 0), None);
    }

    #[test]
    fn numerals_and_natsets() {
        assert!(encode_numeral(0).is_empty());
        assert_eq!(encode_numeral(2), g(&[(0, 2), (0, 4), (2, 4)]));
        assert_eq!(encode_natset(&set(&[0, 1])), g(&[(0, 2), (0, 1), (2, 1)]));
        assert!(encode_natset(&set(&[])).is_empty());
        assert_eq!(encode_natset(&set(&[2])), g(&[(0, 2), (0, 4), (2, 4), (4, 1)]));
        assert_eq!(value(&encode_natset(&set(&[0, 1]))), HfSet::von_neumann(2));
        assert_eq!(value(&encode_natset(&set(&[2]))), HfSet::singleton(HfSet::von_neumann(2)));
        let gappy = set(&[0, 3, 4]);
        let expected = HfSet::new(gappy.iter().map(|&k| HfSet::von_neumann(k as usize)));
        assert_eq!(value(&encode_natset(&gappy)), expected);
    }

    #[test]
    fn pair_close_examples() {
        let a = g(&[(0, 1)]);
        let b = pair_close_bounded(&a, 1, 1).unwrap();
        assert_eq!(b, g(&[(0, 1), (0, 2), (2, 1)]));
        assert_eq!(value(&b), HfSet::von_neumann(2));
        let two = encode_numeral(2);
        assert_eq!(pair_close_bounded(&two, 2, 0).unwrap(), two);
        let bigger = pair_close_bounded(&two, 2, 2).unwrap();
        assert!(validate(&bigger).is_wfev());
        for k in [0, 2] {
            assert_eq!(cone(&bigger, k).unwrap(), cone(&two, k).unwrap());
        }
        assert_eq!(bigger.vertex(), Some(4));
    }

    #[test]
    fn function_digraph_identity() {
        let two = encode_natset(&set(&[0, 1]));
        let f: PartialNodeMap = [(0, 0), (2, 2)].into();
        let fg = func_digraph(&two, &two, &f).unwrap();
        let (zero, one) = (HfSet::von_neumann(0), HfSet::von_neumann(1));
        let expected = HfSet::new([HfSet::kuratowski(&zero, &zero), HfSet::kuratowski(&one, &one)]);
        assert_eq!(value(&fg), expected);
    }

    #[test]
    fn function_digraph_errors() {
        let two = encode_numeral(2);
        let one = encode_numeral(1);
        assert_eq!(func_digraph(&two, &one, &[(0, 0)].into()), Err(DigraphError::DomainMismatch(2)));
        assert_eq!(func_digraph(&one, &two, &[(0, 0)].into()), Err(DigraphError::NotSurjective(2)));
        assert_eq!(func_digraph(&one, &one, &[(0, 7)].into()), Err(DigraphError::DomainMismatch(7)));
        let single = func_digraph(&one, &one, &[(0, 0)].into()).unwrap();
        let zero = HfSet::empty();
        assert_eq!(value(&single), HfSet::singleton(HfSet::kuratowski(&zero, &zero)));
    }
}
