//! First-order formulas of the language `{∈}`.
//!
//! The core connectives are `¬`, `∧` and `∃`; the parser accepts `∨`, `→`,
//! `↔` and `∀` and rewrites them into the core. Terms are variables, parameter
//! slots `#n`, or hereditarily finite constants (the result of substituting
//! parameters or instantiating variables).

mod godel;
mod interp;
mod parse;
mod rewrite;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::hfset::HfSet;

pub use godel::{degodelize, godelize, MAX_CODE_DEPTH};
pub use interp::{translate_interp, DTerm, DigraphFormula};
pub use parse::{parse, MAX_NESTING};
pub use rewrite::{eliminate_params, relativize};

pub type Var = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("formula has parameters or constants")]
    HasParameters,
    #[error("code exceeds the supported size")]
    CodeTooLarge,
    #[error("parameter #{0} is not bound")]
    UnboundParameter(u32),
    #[error("expected {expected} free {what}, found {found}")]
    ArityMismatch { what: &'static str, expected: usize, found: usize },
}

impl FormulaError {
    pub fn code(&self) -> &'static str {
        match self {
            FormulaError::Syntax { .. } => "SYNTAX_ERROR",
            FormulaError::HasParameters => "HAS_PARAMETERS",
            FormulaError::CodeTooLarge => "CODE_TOO_LARGE",
            FormulaError::UnboundParameter(_) => "UNBOUND_PARAMETER",
            FormulaError::ArityMismatch { .. } => "ARITY_MISMATCH",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Param(u32),
    Const(HfSet),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "v{i}"),
            Term::Param(i) => write!(f, "#{i}"),
            Term::Const(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    In(Term, Term),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Formula {
    pub fn member(a: Term, b: Term) -> Formula {
        Formula::In(a, b)
    }

    pub fn equal(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn exists(v: Var, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }

    /// `¬(¬φ ∧ ¬ψ)`.
    pub fn or(self, other: Formula) -> Formula {
        self.not().and(other.not()).not()
    }

    /// `¬(φ ∧ ¬ψ)`.
    pub fn implies(self, other: Formula) -> Formula {
        self.and(other.not()).not()
    }

    /// `¬(φ ∧ ¬ψ) ∧ ¬(ψ ∧ ¬φ)`.
    pub fn iff(self, other: Formula) -> Formula {
        self.clone().implies(other.clone()).and(other.implies(self))
    }

    /// `¬∃v ¬φ`.
    pub fn forall(v: Var, body: Formula) -> Formula {
        Formula::exists(v, body.not()).not()
    }

    /// Variables with a free occurrence.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::In(a, b) | Formula::Eq(a, b) => {
                for t in [a, b] {
                    if let Term::Var(v) = t {
                        if !bound.contains(v) {
                            out.insert(*v);
                        }
                    }
                }
            }
            Formula::Not(p) => p.collect_free(bound, out),
            Formula::And(p, q) => {
                p.collect_free(bound, out);
                q.collect_free(bound, out);
            }
            Formula::Exists(v, p) => {
                bound.push(*v);
                p.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable index occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| {
            if let Term::Var(v) = t {
                out.insert(*v);
            }
        });
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Formula::Exists(v, p) => {
                    out.insert(*v);
                    stack.push(p);
                }
                Formula::Not(p) => stack.push(p),
                Formula::And(p, q) => stack.extend([p.as_ref(), q.as_ref()]),
                _ => {}
            }
        }
        out
    }

    /// Parameter slots referenced.
    pub fn params(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| {
            if let Term::Param(i) = t {
                out.insert(*i);
            }
        });
        out
    }

    pub fn has_constants(&self) -> bool {
        let mut found = false;
        self.visit_terms(&mut |t| found |= matches!(t, Term::Const(_)));
        found
    }

    /// Constants occurring in the formula.
    pub fn constants(&self) -> BTreeSet<HfSet> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| {
            if let Term::Const(s) = t {
                out.insert(s.clone());
            }
        });
        out
    }

    /// No free variables and no parameter slots.
    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty() && self.params().is_empty()
    }

    fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::In(a, b) | Formula::Eq(a, b) => {
                f(a);
                f(b);
            }
            Formula::Not(p) | Formula::Exists(_, p) => p.visit_terms(f),
            Formula::And(p, q) => {
                p.visit_terms(f);
                q.visit_terms(f);
            }
        }
    }

    /// Rebuilds the formula with every term passed through `f`; `f` also
    /// receives the variables bound at that point.
    fn map_terms(&self, bound: &mut Vec<Var>, f: &mut impl FnMut(&Term, &[Var]) -> Term) -> Formula {
        match self {
            Formula::In(a, b) => Formula::In(f(a, bound), f(b, bound)),
            Formula::Eq(a, b) => Formula::Eq(f(a, bound), f(b, bound)),
            Formula::Not(p) => p.map_terms(bound, f).not(),
            Formula::And(p, q) => {
                let p = p.map_terms(bound, f);
                p.and(q.map_terms(bound, f))
            }
            Formula::Exists(v, p) => {
                bound.push(*v);
                let body = p.map_terms(bound, f);
                bound.pop();
                Formula::exists(*v, body)
            }
        }
    }

    /// Replaces the free occurrences of `v` by `t`. `t` must not contain a
    /// variable that gets captured; constants and parameters never are.
    pub fn substitute_var(&self, v: Var, t: &Term) -> Formula {
        self.map_terms(&mut Vec::new(), &mut |term, bound| match term {
            Term::Var(w) if *w == v && !bound.contains(&v) => t.clone(),
            other => other.clone(),
        })
    }

    /// Replaces each parameter slot `#i` by the constant `params[i]`.
    pub fn substitute_params(&self, params: &[HfSet]) -> Result<Formula, FormulaError> {
        if let Some(&missing) = self.params().iter().find(|&&i| i as usize >= params.len()) {
            return Err(FormulaError::UnboundParameter(missing));
        }
        Ok(self.map_terms(&mut Vec::new(), &mut |term, _| match term {
            Term::Param(i) => Term::Const(params[*i as usize].clone()),
            other => other.clone(),
        }))
    }

    /// Renames parameter slot `from` to the term `to`.
    pub fn replace_param(&self, from: u32, to: &Term) -> Formula {
        self.map_terms(&mut Vec::new(), &mut |term, _| match term {
            Term::Param(i) if *i == from => to.clone(),
            other => other.clone(),
        })
    }

    /// Symbol count: one per connective, quantifier, and term occurrence
    /// (so atoms count 2 and `∃v` counts 2).
    pub fn symbol_count(&self) -> usize {
        match self {
            Formula::In(..) | Formula::Eq(..) => 2,
            Formula::Not(p) => 1 + p.symbol_count(),
            Formula::And(p, q) => 1 + p.symbol_count() + q.symbol_count(),
            Formula::Exists(_, p) => 2 + p.symbol_count(),
        }
    }

    /// Height of the syntax tree; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::In(..) | Formula::Eq(..) => 0,
            Formula::Not(p) | Formula::Exists(_, p) => 1 + p.depth(),
            Formula::And(p, q) => 1 + p.depth().max(q.depth()),
        }
    }

    /// The subformulas, `self` included.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if !out.insert(f.clone()) {
                continue;
            }
            match f {
                Formula::Not(p) | Formula::Exists(_, p) => stack.push(p),
                Formula::And(p, q) => stack.extend([p.as_ref(), q.as_ref()]),
                _ => {}
            }
        }
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::In(a, b) => write!(f, "{a} in {b}"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(p) => write!(f, "!{p}"),
            Formula::And(p, q) => write!(f, "({p} & {q})"),
            Formula::Exists(v, p) => write!(f, "E v{v}. {p}"),
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Formula, FormulaError> {
        parse(s)
    }
}
