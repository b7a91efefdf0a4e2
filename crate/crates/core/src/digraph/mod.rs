//! Finite digraphs on the naturals, read as codes of hereditarily finite sets.
//!
//! An edge `(j, k)` says "`j` is an element of `k`". A digraph codes a set when
//! it is well-founded, extensional and has a vertex (WFEV); the coded set is
//! the value of the vertex under the Mostowski collapse.

mod build;
mod io;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::hfset::{self, HfSet};

pub use build::{
    assemble, designator, encode_natset, encode_numeral, func_digraph, kuratowski_node, pair,
    pair_close_bounded, slice, AssembleResult, PairResult,
};

pub type Node = u64;

/// A partial injective map between the fields of two digraphs.
pub type PartialNodeMap = BTreeMap<Node, Node>;

/// Why a digraph fails to be WFE or WFEV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Nodes of a cycle, in edge order.
    Cycle(Vec<Node>),
    /// Two distinct nodes with the same extension.
    ExtensionCollision(Node, Node),
    NoVertex,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cycle(nodes) => {
                let path: Vec<String> = nodes.iter().map(|n| n.to_string()).collect();
                write!(f, "cycle {} -> {}", path.join(" -> "), nodes[0])
            }
            Violation::ExtensionCollision(u, v) => {
                write!(f, "nodes {u} and {v} have the same extension")
            }
            Violation::NoVertex => f.write_str("no unique vertex"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("digraph is not well-founded extensional: {0}")]
    NotWfe(Violation),
    #[error("digraph is not well-founded extensional with a vertex: {0}")]
    NotWfev(Violation),
    #[error("node {0} is not in the field")]
    NodeNotInField(Node),
    #[error("selection is empty")]
    EmptySelection,
    #[error("selection contains the vertex {0}")]
    VertexInSelection(Node),
    #[error("map sends {0} and {1} to the same node {2}")]
    NonInjectiveMap(Node, Node, Node),
    #[error("map is undefined on field node {0}")]
    MapDomainTooSmall(Node),
    #[error("map misses element {0} of the target")]
    NotSurjective(Node),
    #[error("map domain or values do not match the elements of the vertex (node {0})")]
    DomainMismatch(Node),
    #[error("relabelled node exceeds the 64-bit node range")]
    NodeOverflow,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl DigraphError {
    pub fn code(&self) -> &'static str {
        match self {
            DigraphError::NotWfe(v) | DigraphError::NotWfev(v) => match v {
                Violation::Cycle(_) => "NOT_WF",
                Violation::ExtensionCollision(..) => "NOT_EXTENSIONAL",
                Violation::NoVertex => "NO_VERTEX",
            },
            DigraphError::NodeNotInField(_) => "NODE_NOT_IN_FIELD",
            DigraphError::EmptySelection => "EMPTY_SELECTION",
            DigraphError::VertexInSelection(_) => "VERTEX_IN_SELECTION",
            DigraphError::NonInjectiveMap(..) => "NON_INJECTIVE_MAP",
            DigraphError::MapDomainTooSmall(_) => "MAP_DOMAIN_TOO_SMALL",
            DigraphError::NotSurjective(_) => "NOT_SURJECTIVE",
            DigraphError::DomainMismatch(_) => "DOMAIN_MISMATCH",
            DigraphError::NodeOverflow => "NODE_OVERFLOW",
            DigraphError::Parse { .. } => "PARSE_ERROR",
        }
    }

    pub(crate) fn into_wfev(self) -> DigraphError {
        match self {
            DigraphError::NotWfe(v) => DigraphError::NotWfev(v),
            other => other,
        }
    }
}

/// A finite set of ordered edges. Nodes are arbitrary naturals.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digraph {
    edges: BTreeSet<(Node, Node)>,
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.edges.iter()).finish()
    }
}

impl FromIterator<(Node, Node)> for Digraph {
    fn from_iter<I: IntoIterator<Item = (Node, Node)>>(iter: I) -> Self {
        Digraph { edges: iter.into_iter().collect() }
    }
}

impl Digraph {
    pub fn new() -> Digraph {
        Digraph::default()
    }

    pub fn from_edges<I: IntoIterator<Item = (Node, Node)>>(edges: I) -> Digraph {
        edges.into_iter().collect()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Node, Node)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_edge(&self, j: Node, k: Node) -> bool {
        self.edges.contains(&(j, k))
    }

    pub fn insert(&mut self, j: Node, k: Node) -> bool {
        self.edges.insert((j, k))
    }

    pub fn union(&self, other: &Digraph) -> Digraph {
        Digraph { edges: self.edges.union(&other.edges).copied().collect() }
    }

    /// Sources and targets of all edges.
    pub fn field(&self) -> BTreeSet<Node> {
        self.edges.iter().flat_map(|&(j, k)| [j, k]).collect()
    }

    pub fn in_field(&self, u: Node) -> bool {
        self.edges.iter().any(|&(j, k)| j == u || k == u)
    }

    /// `Elm_A u`: the nodes with an edge into `u`.
    pub fn extension(&self, u: Node) -> BTreeSet<Node> {
        self.edges.iter().filter(|e| e.1 == u).map(|e| e.0).collect()
    }

    /// In-neighbours of every field node (empty lists included).
    pub fn predecessors(&self) -> BTreeMap<Node, Vec<Node>> {
        let mut map: BTreeMap<Node, Vec<Node>> = self.field().into_iter().map(|u| (u, Vec::new())).collect();
        for &(j, k) in &self.edges {
            map.get_mut(&k).expect("target in field").push(j);
        }
        map
    }

    /// Out-neighbours of every field node (empty lists included).
    pub fn successors(&self) -> BTreeMap<Node, Vec<Node>> {
        let mut map: BTreeMap<Node, Vec<Node>> = self.field().into_iter().map(|u| (u, Vec::new())).collect();
        for &(j, k) in &self.edges {
            map.get_mut(&j).expect("source in field").push(k);
        }
        map
    }

    /// Lower cone of `u`: every node with an edge chain to `u`, and `u`.
    pub fn lower_cone(&self, u: Node) -> BTreeSet<Node> {
        cone_in(&self.predecessors(), u)
    }

    /// `A ∩ (X × X)`.
    pub fn restrict(&self, nodes: &BTreeSet<Node>) -> Digraph {
        self.edges.iter().filter(|(j, k)| nodes.contains(j) && nodes.contains(k)).copied().collect()
    }

    /// Field nodes, every node after all of its elements; `Err` carries a cycle.
    pub fn topological_order(&self) -> Result<Vec<Node>, Vec<Node>> {
        let succ = self.successors();
        let mut indegree: BTreeMap<Node, usize> = succ.keys().map(|&u| (u, 0)).collect();
        for &(_, k) in &self.edges {
            *indegree.get_mut(&k).expect("target in field") += 1;
        }
        let mut ready: VecDeque<Node> = indegree.iter().filter(|(_, d)| **d == 0).map(|(u, _)| *u).collect();
        let mut order = Vec::with_capacity(succ.len());
        while let Some(u) = ready.pop_front() {
            order.push(u);
            for &w in &succ[&u] {
                let d = indegree.get_mut(&w).expect("node in field");
                *d -= 1;
                if *d == 0 {
                    ready.push_back(w);
                }
            }
        }
        if order.len() == succ.len() {
            return Ok(order);
        }
        // Every leftover node has a leftover predecessor; walk backwards until a
        // node repeats.
        let preds = self.predecessors();
        let placed: BTreeSet<Node> = order.into_iter().collect();
        let start = *succ.keys().find(|u| !placed.contains(u)).expect("leftover node");
        let mut path = vec![start];
        let mut position: HashMap<Node, usize> = HashMap::from([(start, 0)]);
        let mut current = start;
        loop {
            let prev = *preds[&current].iter().find(|p| !placed.contains(p)).expect("leftover predecessor");
            if let Some(&i) = position.get(&prev) {
                let mut cycle: Vec<Node> = path[i..].to_vec();
                cycle.reverse();
                return Err(cycle);
            }
            position.insert(prev, path.len());
            path.push(prev);
            current = prev;
        }
    }

    /// The unique node whose lower cone is the whole field, if any.
    pub fn vertex(&self) -> Option<Node> {
        let succ = self.successors();
        let sinks: Vec<Node> = succ.iter().filter(|(_, out)| out.is_empty()).map(|(u, _)| *u).collect();
        let field_size = succ.len();
        let preds = self.predecessors();
        let candidates: Vec<Node> = if sinks.is_empty() { succ.keys().copied().collect() } else { sinks };
        let mut found = None;
        for u in candidates {
            if cone_in(&preds, u).len() == field_size {
                if found.is_some() {
                    return None;
                }
                found = Some(u);
            }
        }
        found
    }

    /// `Eln A`: the extension of the vertex, empty when there is no vertex.
    pub fn eln(&self) -> BTreeSet<Node> {
        match self.vertex() {
            Some(v) => self.extension(v),
            None => BTreeSet::new(),
        }
    }

    /// Nodes with empty extension.
    fn minimal_nodes(&self) -> Vec<Node> {
        self.predecessors().into_iter().filter(|(_, p)| p.is_empty()).map(|(u, _)| u).collect()
    }

    /// Sorted in-neighbour lists that occur for more than one node.
    fn extension_collision(&self) -> Option<(Node, Node)> {
        let mut seen: HashMap<Vec<Node>, Node> = HashMap::new();
        for (u, mut p) in self.predecessors() {
            p.sort_unstable();
            if let Some(&w) = seen.get(&p) {
                return Some((w, u));
            }
            seen.insert(p, u);
        }
        None
    }
}

fn cone_in(preds: &BTreeMap<Node, Vec<Node>>, u: Node) -> BTreeSet<Node> {
    let mut seen = BTreeSet::from([u]);
    let mut stack = vec![u];
    while let Some(x) = stack.pop() {
        for &p in preds.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(p) {
                stack.push(p);
            }
        }
    }
    seen
}

/// Structural classification of a digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DigraphClass {
    pub well_founded: bool,
    pub extensional: bool,
    /// The empty digraph counts as having a vertex.
    pub has_vertex: bool,
    pub vertex: Option<Node>,
    /// The unique node with empty extension, for nonempty WFE digraphs.
    pub min_node: Option<Node>,
}

impl DigraphClass {
    pub fn is_wfe(&self) -> bool {
        self.well_founded && self.extensional
    }

    pub fn is_wfev(&self) -> bool {
        self.is_wfe() && self.has_vertex
    }
}

pub fn validate(a: &Digraph) -> DigraphClass {
    let well_founded = a.topological_order().is_ok();
    let extensional = a.extension_collision().is_none();
    let vertex = a.vertex();
    let min_node = if well_founded && extensional { a.minimal_nodes().first().copied() } else { None };
    DigraphClass {
        well_founded,
        extensional,
        has_vertex: a.is_empty() || vertex.is_some(),
        vertex,
        min_node,
    }
}

/// `Ok` when `a` is well-founded and extensional; otherwise the first witness.
pub fn check_wfe(a: &Digraph) -> Result<(), DigraphError> {
    a.topological_order().map_err(|c| DigraphError::NotWfe(Violation::Cycle(c)))?;
    if let Some((u, v)) = a.extension_collision() {
        return Err(DigraphError::NotWfe(Violation::ExtensionCollision(u, v)));
    }
    Ok(())
}

pub fn check_wfev(a: &Digraph) -> Result<(), DigraphError> {
    check_wfe(a).map_err(DigraphError::into_wfev)?;
    if !a.is_empty() && a.vertex().is_none() {
        return Err(DigraphError::NotWfev(Violation::NoVertex));
    }
    Ok(())
}

/// `Con_A c`: the restriction of `a` to the lower cone of `c`.
pub fn cone(a: &Digraph, c: Node) -> Result<Digraph, DigraphError> {
    check_wfe(a)?;
    if !a.in_field(c) {
        return Err(DigraphError::NodeNotInField(c));
    }
    Ok(a.restrict(&a.lower_cone(c)))
}

/// `⋃_{j∈X} Con_A j ∪ (X × {v})` for the vertex `v` of `a`.
pub fn multi_restrict(a: &Digraph, selection: &BTreeSet<Node>) -> Result<Digraph, DigraphError> {
    check_wfev(a)?;
    if selection.is_empty() {
        return Err(DigraphError::EmptySelection);
    }
    let field = a.field();
    if let Some(&x) = selection.iter().find(|x| !field.contains(x)) {
        return Err(DigraphError::NodeNotInField(x));
    }
    let v = a.vertex().expect("nonempty WFEV digraph has a vertex");
    if selection.contains(&v) {
        return Err(DigraphError::VertexInSelection(v));
    }
    Ok(multi_restrict_unchecked(a, selection, v))
}

pub(crate) fn multi_restrict_unchecked(a: &Digraph, selection: &BTreeSet<Node>, top: Node) -> Digraph {
    let preds = a.predecessors();
    let mut nodes = BTreeSet::new();
    for &x in selection {
        nodes.extend(cone_in(&preds, x));
    }
    let mut out = a.restrict(&nodes);
    for &x in selection {
        out.insert(x, top);
    }
    out
}

/// `H_AB`: sends `u` to the node `v` of `b` with `Con_A u ≅ Con_B v`, where one
/// exists. Cones are compared through their collapse values.
pub fn hom_map(a: &Digraph, b: &Digraph) -> Result<PartialNodeMap, DigraphError> {
    let xa = hfset::collapse_wfe(a)?;
    let xb = hfset::collapse_wfe(b)?;
    let by_value: HashMap<&HfSet, Node> = xb.iter().map(|(n, s)| (s, *n)).collect();
    Ok(xa.iter().filter_map(|(u, s)| by_value.get(s).map(|&v| (*u, v))).collect())
}

/// Isomorphism test for WFEV digraphs; `Some(witness)` when isomorphic.
pub fn isomorphic(a: &Digraph, b: &Digraph) -> Result<Option<PartialNodeMap>, DigraphError> {
    let ca = hfset::collapse(a)?;
    let cb = hfset::collapse(b)?;
    if ca.value != cb.value {
        return Ok(None);
    }
    let by_value: HashMap<&HfSet, Node> = cb.xi.iter().map(|(n, s)| (s, *n)).collect();
    Ok(Some(ca.xi.iter().map(|(u, s)| (*u, by_value[s])).collect()))
}

/// `a ∈̂ b`: `a ≅ Con_b k` for some `k ∈ Eln b`.
pub fn is_member(a: &Digraph, b: &Digraph) -> Result<bool, DigraphError> {
    check_wfev(a)?;
    check_wfev(b)?;
    for k in b.eln() {
        if isomorphic(a, &cone(b, k)?)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Deterministic representative of the isomorphism class of a WFEV digraph.
pub fn canonicalize(a: &Digraph) -> Result<Digraph, DigraphError> {
    Ok(hfset::encode_set(&hfset::collapse(a)?.value))
}

/// `f[A] = {(f(j), f(k)) : j ⊳ k}` for `f` injective on the field.
pub fn bij_image(a: &Digraph, f: &PartialNodeMap) -> Result<Digraph, DigraphError> {
    let mut preimage: HashMap<Node, Node> = HashMap::new();
    for u in a.field() {
        let image = *f.get(&u).ok_or(DigraphError::MapDomainTooSmall(u))?;
        if let Some(&other) = preimage.get(&image) {
            return Err(DigraphError::NonInjectiveMap(other, u, image));
        }
        preimage.insert(image, u);
    }
    Ok(a.edges().map(|(j, k)| (f[&j], f[&k])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(edges: &[(Node, Node)]) -> Digraph {
        Digraph::from_edges(edges.iter().copied())
    }

    fn two_hat() -> Digraph {
        g(&[(0, 2), (0, 4), (2, 4)])
    }

    #[test]
    fn validate_examples() {
        let c = validate(&g(&[(0, 1)]));
        assert!(c.well_founded && c.extensional && c.has_vertex);
        assert_eq!(c.vertex, Some(1));
        assert_eq!(c.min_node, Some(0));

        let loop_ = validate(&g(&[(0, 0)]));
        assert!(!loop_.well_founded);
        assert_eq!(loop_.min_node, None);

        let twins = validate(&g(&[(0, 2), (1, 2)]));
        assert!(twins.well_founded);
        assert!(!twins.extensional);

        let empty = validate(&Digraph::new());
        assert!(empty.is_wfev());
        assert_eq!(empty.vertex, None);
    }

    #[test]
    fn vertex_needs_uniqueness() {
        assert_eq!(g(&[(0, 1), (0, 2)]).vertex(), None);
        assert_eq!(g(&[(0, 1), (1, 0)]).vertex(), None);
        assert_eq!(g(&[(0, 1), (1, 0), (1, 2)]).vertex(), Some(2));
    }

    #[test]
    fn cycle_witness_is_a_cycle() {
        let a = g(&[(0, 1), (1, 2), (2, 3), (3, 1), (5, 0)]);
        let cycle = a.topological_order().unwrap_err();
        assert_eq!(cycle.len(), 3);
        for i in 0..cycle.len() {
            assert!(a.contains_edge(cycle[i], cycle[(i + 1) % cycle.len()]));
        }
        assert_eq!(check_wfe(&g(&[(7, 7)])), Err(DigraphError::NotWfe(Violation::Cycle(vec![7]))));
    }

    #[test]
    fn cone_examples() {
        assert_eq!(cone(&two_hat(), 2).unwrap(), g(&[(0, 2)]));
        assert_eq!(cone(&two_hat(), 0).unwrap(), Digraph::new());
        assert_eq!(cone(&g(&[(0, 1)]), 1).unwrap(), g(&[(0, 1)]));
        assert_eq!(cone(&two_hat(), 9), Err(DigraphError::NodeNotInField(9)));
        assert_eq!(cone(&g(&[(0, 0)]), 0).unwrap_err().code(), "NOT_WF");
    }

    #[test]
    fn multi_restrict_examples() {
        let sel = |xs: &[Node]| xs.iter().copied().collect::<BTreeSet<_>>();
        assert_eq!(multi_restrict(&two_hat(), &sel(&[0])).unwrap(), g(&[(0, 4)]));
        assert_eq!(multi_restrict(&two_hat(), &sel(&[0, 2])).unwrap(), two_hat());
        assert_eq!(multi_restrict(&g(&[(0, 1)]), &sel(&[0])).unwrap(), g(&[(0, 1)]));
        assert_eq!(multi_restrict(&two_hat(), &sel(&[])), Err(DigraphError::EmptySelection));
        assert_eq!(multi_restrict(&two_hat(), &sel(&[4])), Err(DigraphError::VertexInSelection(4)));
        assert_eq!(multi_restrict(&two_hat(), &sel(&[3])), Err(DigraphError::NodeNotInField(3)));
    }

    #[test]
    fn hom_map_examples() {
        let id: PartialNodeMap = [(0, 0), (2, 2), (4, 4)].into();
        assert_eq!(hom_map(&two_hat(), &two_hat()).unwrap(), id);
        assert_eq!(hom_map(&g(&[(0, 1)]), &two_hat()).unwrap(), [(0, 0), (1, 2)].into());
        assert!(hom_map(&Digraph::new(), &two_hat()).unwrap().is_empty());
    }

    #[test]
    fn isomorphism_examples() {
        let natset01 = g(&[(0, 2), (0, 1), (2, 1)]);
        let w = isomorphic(&natset01, &two_hat()).unwrap().unwrap();
        assert_eq!(w, [(0, 0), (1, 4), (2, 2)].into());
        assert!(isomorphic(&g(&[(0, 2)]), &two_hat()).unwrap().is_none());
        assert!(isomorphic(&Digraph::new(), &Digraph::new()).unwrap().is_some());
        assert_eq!(isomorphic(&g(&[(0, 2), (1, 2)]), &two_hat()).unwrap_err().code(), "NOT_EXTENSIONAL");
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonicalize(&g(&[(5, 9)])).unwrap(), g(&[(0, 1)]));
        let c = canonicalize(&two_hat()).unwrap();
        assert_eq!(canonicalize(&c).unwrap(), c);
        assert_eq!(canonicalize(&g(&[(0, 2), (0, 1), (2, 1)])).unwrap(), c);
    }

    #[test]
    fn bij_image_examples() {
        assert_eq!(bij_image(&g(&[(0, 1)]), &[(0, 4), (1, 7)].into()).unwrap(), g(&[(4, 7)]));
        let doubled: PartialNodeMap = two_hat().field().iter().map(|&k| (k, 2 * k)).collect();
        assert_eq!(bij_image(&two_hat(), &doubled).unwrap(), g(&[(0, 4), (0, 8), (4, 8)]));
        assert_eq!(bij_image(&Digraph::new(), &PartialNodeMap::new()).unwrap(), Digraph::new());
        assert_eq!(bij_image(&g(&[(0, 1)]), &[(0, 3)].into()), Err(DigraphError::MapDomainTooSmall(1)));
        assert_eq!(
            bij_image(&g(&[(0, 1)]), &[(0, 3), (1, 3)].into()),
            Err(DigraphError::NonInjectiveMap(0, 1, 3))
        );
    }

    #[test]
    fn membership_on_numerals() {
        let num = |n| encode_numeral(n);
        for n in 0..=3 {
            for k in 0..=3 {
                assert_eq!(is_member(&num(k), &num(n)).unwrap(), k < n, "{k} in {n}");
            }
        }
        assert!(!is_member(&Digraph::new(), &Digraph::new()).unwrap());
    }
}
