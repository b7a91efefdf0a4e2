//! Hereditarily finite sets.
//!
//! Every [`HfSet`] is hash-consed through a process-wide intern table, so two
//! values are extensionally equal exactly when they share an id. Children are
//! kept sorted by Ackermann index, which makes the brace syntax canonical.
//!
//! The Mostowski collapse of a well-founded extensional digraph and its inverse
//! ([`encode_set`]) live here as well.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::digraph::{Digraph, DigraphError, Node, Violation};

/// Largest `n` accepted by [`v_level`].
pub const MAX_LEVEL: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HfError {
    #[error("malformed set literal at offset {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("level {0} is too large (at most {MAX_LEVEL} is supported)")]
    LevelTooLarge(usize),
}

impl HfError {
    pub fn code(&self) -> &'static str {
        match self {
            HfError::Parse { .. } => "PARSE_ERROR",
            HfError::LevelTooLarge(_) => "LEVEL_TOO_LARGE",
        }
    }
}

struct Inner {
    id: u64,
    children: Box<[HfSet]>,
    rank: u32,
    // Ackermann index when it fits in 64 bits.
    small_index: Option<u64>,
}

/// A hereditarily finite set. Cloning is cheap.
#[derive(Clone)]
pub struct HfSet(Arc<Inner>);

type InternTable = Mutex<HashMap<Box<[u64]>, HfSet>>;

fn intern_table() -> &'static InternTable {
    static TABLE: OnceLock<InternTable> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl HfSet {
    /// Builds the set whose members are `children`. Duplicates are merged.
    pub fn new<I: IntoIterator<Item = HfSet>>(children: I) -> HfSet {
        let mut children: Vec<HfSet> = children.into_iter().collect();
        children.sort();
        children.dedup();
        Self::from_sorted(children)
    }

    fn from_sorted(children: Vec<HfSet>) -> HfSet {
        let key: Box<[u64]> = children.iter().map(HfSet::id).collect();
        let mut table = intern_table().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(existing) = table.get(&key) {
            return existing.clone();
        }
        let rank = children.iter().map(|c| c.rank() + 1).max().unwrap_or(0);
        let small_index = children.iter().try_fold(0u64, |acc, c| {
            let n = c.0.small_index?;
            if n >= 64 {
                None
            } else {
                Some(acc | (1u64 << n))
            }
        });
        let set = HfSet(Arc::new(Inner {
            id: table.len() as u64,
            children: children.into_boxed_slice(),
            rank,
            small_index,
        }));
        table.insert(key, set.clone());
        set
    }

    pub fn empty() -> HfSet {
        Self::from_sorted(Vec::new())
    }

    pub fn singleton(x: HfSet) -> HfSet {
        Self::from_sorted(vec![x])
    }

    /// `{a, b}`
    pub fn unordered_pair(a: HfSet, b: HfSet) -> HfSet {
        HfSet::new([a, b])
    }

    /// Kuratowski pair `{{a}, {a, b}}`.
    pub fn kuratowski(a: &HfSet, b: &HfSet) -> HfSet {
        HfSet::unordered_pair(
            HfSet::singleton(a.clone()),
            HfSet::unordered_pair(a.clone(), b.clone()),
        )
    }

    /// The von Neumann natural `n = {0, ..., n-1}`.
    pub fn von_neumann(n: usize) -> HfSet {
        let mut members = Vec::with_capacity(n);
        for _ in 0..n {
            let next = HfSet::from_sorted(members.clone());
            members.push(next);
        }
        HfSet::from_sorted(members)
    }

    /// Stable identity within this process. Equal sets share an id.
    pub fn id(&self) -> u64 {
        self.0.id
    }

    /// Members in increasing Ackermann order.
    pub fn children(&self) -> &[HfSet] {
        &self.0.children
    }

    pub fn iter(&self) -> std::slice::Iter<'_, HfSet> {
        self.0.children.iter()
    }

    pub fn len(&self) -> usize {
        self.0.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.children.is_empty()
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.0.children.binary_search(x).is_ok()
    }

    pub fn is_subset(&self, other: &HfSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    /// Set-theoretic rank: `rank(∅) = 0`, otherwise one more than the largest
    /// member rank. `x ∈ V_n` iff `rank(x) < n`.
    pub fn rank(&self) -> u32 {
        self.0.rank
    }

    /// Every member of a member is a member.
    pub fn is_transitive(&self) -> bool {
        self.iter().all(|c| c.is_subset(self))
    }

    /// Ackermann index `N(s) = Σ_{e∈s} 2^N(e)`, or `None` when some member's
    /// index exceeds [`crate::coding::MAX_SHIFT_BITS`] (the result would not
    /// fit in memory).
    pub fn ack_index(&self) -> Option<BigUint> {
        if let Some(n) = self.0.small_index {
            return Some(BigUint::from(n));
        }
        let mut total = BigUint::zero();
        for c in self.iter() {
            let shift = c
                .ack_index()?
                .to_u64()
                .filter(|s| *s <= crate::coding::MAX_SHIFT_BITS)?;
            total += BigUint::one() << shift;
        }
        Some(total)
    }

    /// `Some(n)` when this set is the von Neumann natural `n`.
    pub fn as_natural(&self) -> Option<usize> {
        let n = self.len();
        if *self == HfSet::von_neumann(n) {
            Some(n)
        } else {
            None
        }
    }

    /// Union of the members.
    pub fn union(&self) -> HfSet {
        HfSet::new(self.iter().flat_map(|c| c.iter().cloned()))
    }

    pub fn to_family(&self) -> BTreeSet<HfSet> {
        self.iter().cloned().collect()
    }

    pub fn from_family(family: &BTreeSet<HfSet>) -> HfSet {
        HfSet::from_sorted(family.iter().cloned().collect())
    }
}

impl PartialEq for HfSet {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for HfSet {}

impl Hash for HfSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

/// Ackermann-index order.
impl Ord for HfSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0.id == other.0.id {
            return Ordering::Equal;
        }
        match (self.0.small_index, other.0.small_index) {
            (Some(a), Some(b)) => return a.cmp(&b),
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (None, None) => {}
        }
        // Compare binary expansions from the most significant member down.
        let (a, b) = (self.children(), other.children());
        let (mut i, mut j) = (a.len(), b.len());
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (0, _) => return Ordering::Less,
                (_, 0) => return Ordering::Greater,
                _ => {
                    i -= 1;
                    j -= 1;
                    match a[i].cmp(&b[j]) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
            }
        }
    }
}

impl PartialOrd for HfSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for HfSet {
    type Err = HfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = BraceParser { src: s.as_bytes(), pos: 0 };
        parser.skip_ws();
        let set = parser.parse_set()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(set)
    }
}

/// Parses a set literal starting at byte offset `start` of `src`. Returns the
/// set and the offset just past it. Used by the formula parser for constants.
pub(crate) fn parse_prefix(src: &str, start: usize) -> Result<(HfSet, usize), HfError> {
    let mut parser = BraceParser { src: src.as_bytes(), pos: start };
    let set = parser.parse_set()?;
    Ok((set, parser.pos))
}

struct BraceParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl BraceParser<'_> {
    fn error(&self, message: &str) -> HfError {
        HfError::Parse { pos: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    // Iterative so that deeply nested input cannot overflow the stack.
    fn parse_set(&mut self) -> Result<HfSet, HfError> {
        if self.src.get(self.pos) != Some(&b'{') {
            return Err(self.error("expected '{'"));
        }
        self.pos += 1;
        let mut stack: Vec<Vec<HfSet>> = vec![Vec::new()];
        loop {
            self.skip_ws();
            match self.src.get(self.pos) {
                Some(b'{') => {
                    self.pos += 1;
                    stack.push(Vec::new());
                }
                Some(b'}') => {
                    self.pos += 1;
                    let done = HfSet::new(stack.pop().expect("non-empty stack"));
                    match stack.last_mut() {
                        Some(parent) => {
                            parent.push(done);
                            self.skip_ws();
                            match self.src.get(self.pos) {
                                Some(b',') => {
                                    self.pos += 1;
                                    self.skip_ws();
                                    if self.src.get(self.pos) != Some(&b'{') {
                                        return Err(self.error("expected '{' after ','"));
                                    }
                                }
                                Some(b'}') => {}
                                _ => return Err(self.error("expected ',' or '}'")),
                            }
                        }
                        None => return Ok(done),
                    }
                }
                Some(_) => return Err(self.error("expected '{' or '}'")),
                None => return Err(self.error("unexpected end of input")),
            }
        }
    }
}

/// Transitive closure of the members of `s`: members, members of members, and
/// so on. This is the least transitive family containing every member of `s`.
pub fn transitive_closure(s: &HfSet) -> BTreeSet<HfSet> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<HfSet> = s.iter().cloned().collect();
    while let Some(x) = stack.pop() {
        if out.insert(x.clone()) {
            stack.extend(x.iter().cloned());
        }
    }
    out
}

/// `true` when every member of every member of `family` is in `family`.
pub fn is_transitive_family(family: &BTreeSet<HfSet>) -> bool {
    family.iter().all(|x| x.iter().all(|y| family.contains(y)))
}

/// All subsets of `family`, as sets.
///
/// Panics if the family has more than 24 members.
pub fn powerset(family: &BTreeSet<HfSet>) -> BTreeSet<HfSet> {
    let members: Vec<HfSet> = family.iter().cloned().collect();
    assert!(members.len() <= 24, "powerset of a {}-element family", members.len());
    (0u32..1 << members.len()).map(|mask| subset_by_mask(&members, mask as u64)).collect()
}

/// The subset of `members` selected by the bits of `mask`. If `members` is in
/// increasing Ackermann order, increasing masks give increasing subsets.
pub fn subset_by_mask(members: &[HfSet], mask: u64) -> HfSet {
    let picked = members
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, x)| x.clone())
        .collect();
    HfSet::from_sorted(picked)
}

/// `V_0 = ∅`, `V_{n+1} = P(V_n)`.
pub fn v_level(n: usize) -> Result<BTreeSet<HfSet>, HfError> {
    if n > MAX_LEVEL {
        return Err(HfError::LevelTooLarge(n));
    }
    let mut level = BTreeSet::new();
    for _ in 0..n {
        level = powerset(&level);
    }
    Ok(level)
}

/// Bounded approximation of the finite-subset closure: `depth` rounds, each
/// adding every subset of the current family with at most `subset_size_limit`
/// members (the empty subset included).
pub fn pair_closure_bounded(
    family: &BTreeSet<HfSet>,
    subset_size_limit: usize,
    depth: usize,
) -> BTreeSet<HfSet> {
    let mut current = family.clone();
    for _ in 0..depth {
        let members: Vec<HfSet> = current.iter().cloned().collect();
        let mut next = current.clone();
        let mut chosen = Vec::new();
        add_small_subsets(&members, 0, subset_size_limit, &mut chosen, &mut next);
        if next.len() == current.len() {
            break;
        }
        current = next;
    }
    current
}

fn add_small_subsets(
    members: &[HfSet],
    from: usize,
    limit: usize,
    chosen: &mut Vec<HfSet>,
    out: &mut BTreeSet<HfSet>,
) {
    out.insert(HfSet::new(chosen.iter().cloned()));
    if chosen.len() == limit {
        return;
    }
    for i in from..members.len() {
        chosen.push(members[i].clone());
        add_small_subsets(members, i + 1, limit, chosen, out);
        chosen.pop();
    }
}

/// Mostowski collapse of a WFEV digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseResult {
    /// The realization: the value of the vertex, or `∅` for the empty digraph.
    pub value: HfSet,
    /// The collapsing map; `j ⊳ k` iff `xi[j] ∈ xi[k]`.
    pub xi: BTreeMap<Node, HfSet>,
}

/// Collapse of a WFEV digraph.
pub fn collapse(a: &Digraph) -> Result<CollapseResult, DigraphError> {
    let (nodes, values, sinks) = collapse_dense(a).map_err(DigraphError::into_wfev)?;
    let value = match sinks.as_slice() {
        [] => HfSet::empty(),
        // Acyclic, so every node reaches some sink: one sink is the vertex.
        [v] => values[*v].clone(),
        _ => return Err(DigraphError::NotWfev(Violation::NoVertex)),
    };
    Ok(CollapseResult { value, xi: nodes.into_iter().zip(values).collect() })
}

/// Collapsing map of a WFE digraph (no vertex required), computed bottom-up.
pub fn collapse_wfe(a: &Digraph) -> Result<BTreeMap<Node, HfSet>, DigraphError> {
    let (nodes, values, _) = collapse_dense(a)?;
    Ok(nodes.into_iter().zip(values).collect())
}

// Sorted field, the value of each field node, and the indices of the sinks.
type Dense = (Vec<Node>, Vec<HfSet>, Vec<usize>);

fn collapse_dense(a: &Digraph) -> Result<Dense, DigraphError> {
    let nodes: Vec<Node> = a.field().into_iter().collect();
    let index = |u: Node| nodes.binary_search(&u).expect("node in field");
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (j, k) in a.edges() {
        let (j, k) = (index(j), index(k));
        preds[k].push(j);
        succs[j].push(k);
    }
    let mut waiting: Vec<usize> = preds.iter().map(Vec::len).collect();
    let mut ready: Vec<usize> = (0..nodes.len()).filter(|&u| waiting[u] == 0).collect();
    let mut values: Vec<Option<HfSet>> = vec![None; nodes.len()];
    let mut seen: HashMap<HfSet, usize> = HashMap::with_capacity(nodes.len());
    let mut placed = 0;
    while let Some(u) = ready.pop() {
        let value = HfSet::new(preds[u].iter().map(|&p| values[p].clone().expect("element placed first")));
        if let Some(&other) = seen.get(&value) {
            let (x, y) = (nodes[other], nodes[u]);
            return Err(DigraphError::NotWfe(Violation::ExtensionCollision(x.min(y), x.max(y))));
        }
        seen.insert(value.clone(), u);
        values[u] = Some(value);
        placed += 1;
        for &w in &succs[u] {
            waiting[w] -= 1;
            if waiting[w] == 0 {
                ready.push(w);
            }
        }
    }
    if placed < nodes.len() {
        let cycle = a.topological_order().expect_err("leftover nodes lie on a cycle");
        return Err(DigraphError::NotWfe(Violation::Cycle(cycle)));
    }
    let sinks = (0..nodes.len()).filter(|&u| succs[u].is_empty()).collect();
    Ok((nodes, values.into_iter().map(|v| v.expect("every node placed")).collect(), sinks))
}

/// The membership digraph of `TC({s})`, nodes numbered in increasing
/// Ackermann order; `∅` encodes as the empty digraph.
pub fn encode_set(s: &HfSet) -> Digraph {
    let mut nodes = transitive_closure(s);
    nodes.insert(s.clone());
    let index: HashMap<&HfSet, Node> = nodes.iter().zip(0..).collect();
    let mut edges = Vec::new();
    for t in &nodes {
        for e in t.iter() {
            edges.push((index[e], index[t]));
        }
    }
    Digraph::from_edges(edges)
}
