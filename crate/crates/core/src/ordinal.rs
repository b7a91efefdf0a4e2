//! Ordinals below ε₀ in Cantor normal form, and finite well-orders.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::coding;
use crate::digraph::{Digraph, Node};
use crate::hfset;

/// Largest finite exponent accepted with an infinite base; the normal form of
/// `α^n` has about `n` terms.
pub const MAX_FINITE_EXPONENT: u64 = 4096;
/// Largest bit length of a natural produced by exponentiation.
pub const MAX_NATURAL_BITS: u64 = 1 << 20;
/// Deepest exponent nesting accepted by the parser.
pub const MAX_PARSE_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderViolation {
    Reflexive(Node),
    /// Both `(u, v)` and `(v, u)` are edges.
    Symmetric(Node, Node),
    /// Neither `(u, v)` nor `(v, u)` is an edge.
    Incomparable(Node, Node),
    /// `u < v < w` without `u < w`.
    NotTransitive(Node, Node, Node),
}

impl fmt::Display for OrderViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderViolation::Reflexive(u) => write!(f, "self-loop at {u}"),
            OrderViolation::Symmetric(u, v) => write!(f, "cycle between {u} and {v}"),
            OrderViolation::Incomparable(u, v) => write!(f, "{u} and {v} are incomparable"),
            OrderViolation::NotTransitive(u, v, w) => write!(f, "{u} < {v} < {w} but not {u} < {w}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("syntax error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("not a strict linear order: {0}")]
    NotLinearOrder(OrderViolation),
    #[error("result is too large to represent")]
    TooLarge,
}

impl OrdinalError {
    pub fn code(&self) -> &'static str {
        match self {
            OrdinalError::Parse { .. } => "PARSE_ERROR",
            OrdinalError::NotLinearOrder(_) => "NOT_LINEAR_ORDER",
            OrdinalError::TooLarge => "TOO_LARGE",
        }
    }
}

/// `ω^e1·c1 + … + ω^ek·ck` with `e1 > … > ek` and every `ci > 0`.
///
/// The derived order is the ordinal order: terms compare lexicographically,
/// exponent before coefficient, and a proper prefix is smaller.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CnfOrdinal {
    terms: Vec<(CnfOrdinal, BigUint)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Pow,
}

impl CnfOrdinal {
    pub fn zero() -> CnfOrdinal {
        CnfOrdinal::default()
    }

    pub fn one() -> CnfOrdinal {
        CnfOrdinal::natural(1u32)
    }

    pub fn natural(n: impl Into<BigUint>) -> CnfOrdinal {
        let n = n.into();
        if n.is_zero() {
            return CnfOrdinal::zero();
        }
        CnfOrdinal { terms: vec![(CnfOrdinal::zero(), n)] }
    }

    pub fn omega() -> CnfOrdinal {
        CnfOrdinal::omega_pow(CnfOrdinal::one())
    }

    /// `ω^e`.
    pub fn omega_pow(e: CnfOrdinal) -> CnfOrdinal {
        CnfOrdinal { terms: vec![(e, BigUint::one())] }
    }

    /// From `(exponent, coefficient)` terms in any order; zero coefficients
    /// are dropped and the result is normalized by ordinal addition.
    pub fn from_terms(terms: Vec<(CnfOrdinal, BigUint)>) -> CnfOrdinal {
        terms
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .fold(CnfOrdinal::zero(), |acc, (e, c)| acc.add(&CnfOrdinal { terms: vec![(e, c)] }))
    }

    pub fn terms(&self) -> &[(CnfOrdinal, BigUint)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.is_zero())
    }

    pub fn as_natural(&self) -> Option<BigUint> {
        match self.terms.as_slice() {
            [] => Some(BigUint::zero()),
            [(e, c)] if e.is_zero() => Some(c.clone()),
            _ => None,
        }
    }

    /// Split into the part with positive exponents and the finite remainder.
    fn split_finite(&self) -> (CnfOrdinal, BigUint) {
        match self.terms.last() {
            Some((e, c)) if e.is_zero() => {
                (CnfOrdinal { terms: self.terms[..self.terms.len() - 1].to_vec() }, c.clone())
            }
            _ => (self.clone(), BigUint::zero()),
        }
    }

    pub fn add(&self, other: &CnfOrdinal) -> CnfOrdinal {
        let Some((e, c)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(CnfOrdinal, BigUint)> = self.terms.iter().take_while(|(f, _)| f > e).cloned().collect();
        let mut coefficient = c.clone();
        if let Some((f, d)) = self.terms.get(terms.len()) {
            if f == e {
                coefficient += d;
            }
        }
        terms.push((e.clone(), coefficient));
        terms.extend(other.terms[1..].iter().cloned());
        CnfOrdinal { terms }
    }

    pub fn mul(&self, other: &CnfOrdinal) -> CnfOrdinal {
        let Some((lead, lead_c)) = self.terms.first() else {
            return CnfOrdinal::zero();
        };
        let mut out = CnfOrdinal::zero();
        for (f, d) in &other.terms {
            let part = if f.is_zero() {
                let mut terms = self.terms.clone();
                terms[0].1 = lead_c * d;
                CnfOrdinal { terms }
            } else {
                CnfOrdinal { terms: vec![(lead.add(f), d.clone())] }
            };
            out = out.add(&part);
        }
        out
    }

    pub fn pow(&self, other: &CnfOrdinal) -> Result<CnfOrdinal, OrdinalError> {
        if other.is_zero() {
            return Ok(CnfOrdinal::one());
        }
        if self.is_zero() {
            return Ok(CnfOrdinal::zero());
        }
        if *self == CnfOrdinal::one() {
            return Ok(CnfOrdinal::one());
        }
        let (limit, m) = other.split_finite();
        if let Some(n) = self.as_natural() {
            let bits = n.bits().saturating_mul(m.to_u64().unwrap_or(u64::MAX));
            if bits > MAX_NATURAL_BITS {
                return Err(OrdinalError::TooLarge);
            }
            let finite = num_traits::pow::pow(n, m.to_usize().expect("bounded above"));
            if limit.is_zero() {
                return Ok(CnfOrdinal::natural(finite));
            }
            // n^(ω^f·d) = ω^(ω^f'·d) with 1 + f' = f.
            let exponent = CnfOrdinal {
                terms: limit.terms.iter().map(|(f, d)| (f.one_less_if_finite(), d.clone())).collect(),
            };
            return Ok(CnfOrdinal { terms: vec![(exponent, finite)] });
        }
        let m = m.to_u64().filter(|m| *m <= MAX_FINITE_EXPONENT).ok_or(OrdinalError::TooLarge)?;
        let lead = &self.terms[0].0;
        let mut out = if limit.is_zero() { CnfOrdinal::one() } else { CnfOrdinal::omega_pow(lead.mul(&limit)) };
        // Square-and-multiply on the finite part.
        let mut base = self.clone();
        let mut e = m;
        let mut finite_part = CnfOrdinal::one();
        while e > 0 {
            if e & 1 == 1 {
                finite_part = finite_part.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out = out.mul(&finite_part);
        Ok(out)
    }

    /// `f'` with `1 + f' = f`, for `f ≥ 1`.
    fn one_less_if_finite(&self) -> CnfOrdinal {
        match self.as_natural() {
            Some(n) => CnfOrdinal::natural(n - 1u32),
            None => self.clone(),
        }
    }

    pub fn arith(op: ArithOp, a: &CnfOrdinal, b: &CnfOrdinal) -> Result<CnfOrdinal, OrdinalError> {
        match op {
            ArithOp::Add => Ok(a.add(b)),
            ArithOp::Mul => Ok(a.mul(b)),
            ArithOp::Pow => a.pow(b),
        }
    }
}

impl fmt::Display for CnfOrdinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            f.write_str("w")?;
            match e.as_natural() {
                Some(n) if n.is_one() => {}
                Some(n) => write!(f, "^{n}")?,
                None if *e == CnfOrdinal::omega() => f.write_str("^w")?,
                None => write!(f, "^{{{e}}}")?,
            }
            if !c.is_one() {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

struct OrdParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl OrdParser<'_> {
    fn error<T>(&self, message: &str) -> Result<T, OrdinalError> {
        Err(OrdinalError::Parse { pos: self.pos, message: message.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn natural(&mut self) -> Result<BigUint, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a natural number");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("nonempty digit string"))
    }

    fn sum(&mut self, depth: usize) -> Result<CnfOrdinal, OrdinalError> {
        if depth > MAX_PARSE_DEPTH {
            return self.error("exponents nested too deeply");
        }
        let mut acc = self.term(depth)?;
        while self.eat(b'+') {
            acc = acc.add(&self.term(depth)?);
        }
        Ok(acc)
    }

    fn term(&mut self, depth: usize) -> Result<CnfOrdinal, OrdinalError> {
        self.skip_ws();
        if !self.eat(b'w') {
            return Ok(CnfOrdinal::natural(self.natural()?));
        }
        let exponent = if self.eat(b'^') {
            if self.eat(b'{') {
                let e = self.sum(depth + 1)?;
                if !self.eat(b'}') {
                    return self.error("expected '}'");
                }
                e
            } else if self.eat(b'w') {
                CnfOrdinal::omega()
            } else {
                CnfOrdinal::natural(self.natural()?)
            }
        } else {
            CnfOrdinal::one()
        };
        let coefficient = if self.eat(b'*') { self.natural()? } else { BigUint::one() };
        Ok(CnfOrdinal::from_terms(vec![(exponent, coefficient)]))
    }
}

impl FromStr for CnfOrdinal {
    type Err = OrdinalError;

    /// Sums of `w^{e}*c` terms, `w^n`, `w`, and naturals; not necessarily in
    /// normal form (`1 + w` reads as `w`).
    fn from_str(s: &str) -> Result<CnfOrdinal, OrdinalError> {
        let mut p = OrdParser { src: s.as_bytes(), pos: 0 };
        let value = p.sum(0)?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return p.error("unexpected trailing input");
        }
        Ok(value)
    }
}

/// Order type of a finite strict linear order, with the position of each node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellOrderCollapse {
    pub length: usize,
    pub iso: BTreeMap<Node, usize>,
}

pub fn check_linear_order(a: &Digraph) -> Result<(), OrdinalError> {
    let fail = |v| Err(OrdinalError::NotLinearOrder(v));
    let field: Vec<Node> = a.field().into_iter().collect();
    for &u in &field {
        if a.contains_edge(u, u) {
            return fail(OrderViolation::Reflexive(u));
        }
    }
    for (i, &u) in field.iter().enumerate() {
        for &v in &field[i + 1..] {
            match (a.contains_edge(u, v), a.contains_edge(v, u)) {
                (true, true) => return fail(OrderViolation::Symmetric(u, v)),
                (false, false) => return fail(OrderViolation::Incomparable(u, v)),
                _ => {}
            }
        }
    }
    for (u, v) in a.edges() {
        for w in a.successors()[&v].iter().copied() {
            if !a.contains_edge(u, w) {
                return fail(OrderViolation::NotTransitive(u, v, w));
            }
        }
    }
    Ok(())
}

/// The isomorphism of a finite strict linear order onto its length, through
/// the Mostowski collapse: each node collapses to the von Neumann ordinal of
/// its position.
pub fn collapse_wellorder(a: &Digraph) -> Result<WellOrderCollapse, OrdinalError> {
    check_linear_order(a)?;
    let xi = hfset::collapse_wfe(a).expect("strict linear orders are well-founded and extensional");
    let iso: BTreeMap<Node, usize> =
        xi.into_iter().map(|(u, s)| (u, s.as_natural().expect("collapses to an ordinal"))).collect();
    Ok(WellOrderCollapse { length: iso.len(), iso })
}

fn node(x: u64, y: u64) -> Node {
    coding::pair(x, y).expect("small order")
}

// A one-point order has no edges, so as a digraph it is the empty order.

/// `a + b` as an order: `a` copies then `b`, nodes `<0, x>` and `<1, y>`.
pub fn sum_order(a: u64, b: u64) -> Digraph {
    let points: Vec<Node> = (0..a).map(|x| node(0, x)).chain((0..b).map(|y| node(1, y))).collect();
    let mut out = Digraph::new();
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            out.insert(p, q);
        }
    }
    out
}

/// `a · b` as an order: pairs `(x, y)` with `x < a`, `y < b`, compared on `y`
/// first and then on `x`, nodes `<x, y>`.
pub fn product_order(a: u64, b: u64) -> Digraph {
    let key = |(x, y): (u64, u64)| (y, x);
    let points: Vec<(u64, u64)> = (0..a).flat_map(|x| (0..b).map(move |y| (x, y))).collect();
    let mut out = Digraph::new();
    for &p in &points {
        for &q in &points {
            if key(p).cmp(&key(q)) == Ordering::Less {
                out.insert(node(p.0, p.1), node(q.0, q.1));
            }
        }
    }
    out
}
