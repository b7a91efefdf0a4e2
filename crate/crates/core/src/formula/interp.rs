//! Translation of `∈`-formulas into statements about WFEV digraphs: `=`
//! becomes isomorphism, `∈` becomes cone membership, and quantifiers range
//! over WFEV digraphs.

use std::fmt;

use crate::digraph::Digraph;
use crate::hfset::encode_set;

use super::{Formula, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DTerm {
    Var(Var),
    /// Digraph argument, from a parameter slot.
    Arg(u32),
    Const(Digraph),
}

impl fmt::Display for DTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DTerm::Var(i) => write!(f, "V{i}"),
            DTerm::Arg(i) => write!(f, "A{i}"),
            DTerm::Const(g) => {
                let edges: Vec<String> = g.edges().map(|(j, k)| format!("({j},{k})")).collect();
                write!(f, "{{{}}}", edges.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DigraphFormula {
    /// `X ≅ Y`.
    Iso(DTerm, DTerm),
    /// `X ∈̂ Y`: `X ≅ Con_Y k` for some `k ∈ Eln Y`.
    Mem(DTerm, DTerm),
    Not(Box<DigraphFormula>),
    And(Box<DigraphFormula>, Box<DigraphFormula>),
    /// Quantifier over WFEV digraphs.
    ExistsWfev(Var, Box<DigraphFormula>),
}

impl fmt::Display for DigraphFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DigraphFormula::Iso(a, b) => write!(f, "{a} ≅ {b}"),
            DigraphFormula::Mem(a, b) => write!(f, "∃k∈Eln({b}). {a} ≅ Con_{{{b}}}(k)"),
            DigraphFormula::Not(p) => write!(f, "¬{p}"),
            DigraphFormula::And(p, q) => write!(f, "({p} ∧ {q})"),
            DigraphFormula::ExistsWfev(v, p) => write!(f, "∃V{v}∈wfev. {p}"),
        }
    }
}

fn translate_term(t: &Term) -> DTerm {
    match t {
        Term::Var(i) => DTerm::Var(*i),
        Term::Param(i) => DTerm::Arg(*i),
        Term::Const(s) => DTerm::Const(encode_set(s)),
    }
}

/// The interpretation of `f` over digraphs. Parameter slots become digraph
/// arguments; constants become their canonical encodings.
pub fn translate_interp(f: &Formula) -> DigraphFormula {
    match f {
        Formula::In(a, b) => DigraphFormula::Mem(translate_term(a), translate_term(b)),
        Formula::Eq(a, b) => DigraphFormula::Iso(translate_term(a), translate_term(b)),
        Formula::Not(p) => DigraphFormula::Not(Box::new(translate_interp(p))),
        Formula::And(p, q) => DigraphFormula::And(Box::new(translate_interp(p)), Box::new(translate_interp(q))),
        Formula::Exists(v, p) => DigraphFormula::ExistsWfev(*v, Box::new(translate_interp(p))),
    }
}
