//! Recursive-descent parser.
//!
//! ```text
//! formula := ("E" | "A") var "." formula
//!          | "!" formula
//!          | "(" formula ")"
//!          | "(" formula (op formula)+ ")"      all ops in one group equal
//!          | term ("in" | "=") term
//! op      := "&" | "|" | "->" | "<->"
//! term    := var | "#" nat | braces
//! var     := "v" nat | lowercase identifier
//! ```
//!
//! `∃ ∀ ¬ ∧ ∨ → ↔ ∈` are accepted in place of the ASCII forms. Named variables
//! get indices above every numbered one, in order of first appearance.

use std::collections::HashMap;

use crate::hfset;

use super::{Formula, FormulaError, Term, Var};

/// Deepest accepted nesting of connectives and quantifiers.
pub const MAX_NESTING: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Exists,
    Forall,
    Not,
    LParen,
    RParen,
    Dot,
    And,
    Or,
    Implies,
    Iff,
    In,
    Eq,
    NumVar(Var),
    Named(String),
    Param(u32),
    Const(hfset::HfSet),
}

fn describe(t: Option<&(Tok, usize)>) -> String {
    match t {
        None => "end of input".to_string(),
        Some((tok, _)) => format!("{tok:?}"),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, FormulaError> {
    let err = |pos: usize, message: String| FormulaError::Syntax { pos, message };
    let mut out = Vec::new();
    let mut i = 0;
    while let Some(c) = src[i..].chars().next() {
        let start = i;
        let single = match c {
            '∃' => Some(Tok::Exists),
            '∀' => Some(Tok::Forall),
            '!' | '¬' => Some(Tok::Not),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '.' => Some(Tok::Dot),
            '&' | '∧' => Some(Tok::And),
            '|' | '∨' => Some(Tok::Or),
            '→' => Some(Tok::Implies),
            '↔' => Some(Tok::Iff),
            '∈' => Some(Tok::In),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, start));
            i += c.len_utf8();
            continue;
        }
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if src[i..].starts_with("->") {
            out.push((Tok::Implies, start));
            i += 2;
            continue;
        }
        if src[i..].starts_with("<->") {
            out.push((Tok::Iff, start));
            i += 3;
            continue;
        }
        if c == '{' {
            let (set, end) = hfset::parse_prefix(src, i).map_err(|e| err(start, e.to_string()))?;
            out.push((Tok::Const(set), start));
            i = end;
            continue;
        }
        if c == '#' {
            let digits: String = src[i + 1..].chars().take_while(|d| d.is_ascii_digit()).collect();
            let n = digits.parse().map_err(|_| err(start, "expected a slot number after '#'".into()))?;
            out.push((Tok::Param(n), start));
            i += 1 + digits.len();
            continue;
        }
        if c.is_ascii_alphabetic() {
            let word: String = src[i..].chars().take_while(|d| d.is_ascii_alphanumeric() || *d == '_').collect();
            i += word.len();
            let tok = match word.as_str() {
                "E" => Tok::Exists,
                "A" => Tok::Forall,
                "in" => Tok::In,
                w if w.starts_with('v') && w.len() > 1 && w[1..].bytes().all(|b| b.is_ascii_digit()) => {
                    let n = w[1..].parse().map_err(|_| err(start, format!("variable index too large in {w}")))?;
                    Tok::NumVar(n)
                }
                w if w.starts_with(|ch: char| ch.is_ascii_lowercase()) => Tok::Named(word.clone()),
                w => return Err(err(start, format!("unexpected word {w:?}"))),
            };
            out.push((tok, start));
            continue;
        }
        return Err(err(start, format!("unexpected character {c:?}")));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    And,
    Or,
    Implies,
    Iff,
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    at: usize,
    end: usize,
    names: HashMap<String, Var>,
    name_order: Vec<String>,
}

/// Variables before name resolution: numbered ones are final, named ones are
/// placeholders in `names`.
#[derive(Clone, Copy)]
enum RawVar {
    Num(Var),
    Named(Var),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a (Tok, usize)> {
        self.toks.get(self.at)
    }

    fn pos(&self) -> usize {
        self.peek().map(|t| t.1).unwrap_or(self.end)
    }

    fn error<T>(&self, message: String) -> Result<T, FormulaError> {
        Err(FormulaError::Syntax { pos: self.pos(), message })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), FormulaError> {
        match self.peek() {
            Some((t, _)) if *t == tok => {
                self.at += 1;
                Ok(())
            }
            other => self.error(format!("expected {tok:?}, found {}", describe(other))),
        }
    }

    fn named(&mut self, name: &str) -> Var {
        if let Some(&k) = self.names.get(name) {
            return k;
        }
        let k = self.name_order.len() as Var;
        self.names.insert(name.to_string(), k);
        self.name_order.push(name.to_string());
        k
    }

    fn var(&mut self) -> Result<RawVar, FormulaError> {
        match self.peek() {
            Some((Tok::NumVar(n), _)) => {
                self.at += 1;
                Ok(RawVar::Num(*n))
            }
            Some((Tok::Named(name), _)) => {
                self.at += 1;
                Ok(RawVar::Named(self.named(name)))
            }
            other => self.error(format!("expected a variable, found {}", describe(other))),
        }
    }

    fn term(&mut self) -> Result<RawTerm, FormulaError> {
        match self.peek() {
            Some((Tok::Param(n), _)) => {
                self.at += 1;
                Ok(RawTerm::Param(*n))
            }
            Some((Tok::Const(s), _)) => {
                self.at += 1;
                Ok(RawTerm::Const(s.clone()))
            }
            Some((Tok::NumVar(_) | Tok::Named(_), _)) => Ok(RawTerm::Var(self.var()?)),
            other => self.error(format!("expected a term, found {}", describe(other))),
        }
    }

    fn formula(&mut self, depth: usize) -> Result<Raw, FormulaError> {
        if depth > MAX_NESTING {
            return self.error("formula nested too deeply".into());
        }
        match self.peek() {
            Some((Tok::Exists | Tok::Forall, _)) => {
                let universal = self.peek().map(|t| &t.0) == Some(&Tok::Forall);
                self.at += 1;
                let v = self.var()?;
                self.expect(Tok::Dot)?;
                let body = Box::new(self.formula(depth + 1)?);
                Ok(if universal { Raw::Forall(v, body) } else { Raw::Exists(v, body) })
            }
            Some((Tok::Not, _)) => {
                self.at += 1;
                Ok(Raw::Not(Box::new(self.formula(depth + 1)?)))
            }
            Some((Tok::LParen, _)) => {
                self.at += 1;
                let mut acc = self.formula(depth + 1)?;
                let mut group_op = None;
                loop {
                    let op = match self.peek() {
                        Some((Tok::RParen, _)) => {
                            self.at += 1;
                            return Ok(acc);
                        }
                        Some((Tok::And, _)) => Op::And,
                        Some((Tok::Or, _)) => Op::Or,
                        Some((Tok::Implies, _)) => Op::Implies,
                        Some((Tok::Iff, _)) => Op::Iff,
                        other => return self.error(format!("expected a connective or ')', found {}", describe(other))),
                    };
                    if group_op.is_some_and(|g| g != op) {
                        return self.error("mixed connectives need parentheses".into());
                    }
                    group_op = Some(op);
                    self.at += 1;
                    let rhs = self.formula(depth + 1)?;
                    acc = Raw::Binary(op, Box::new(acc), Box::new(rhs));
                }
            }
            Some(_) => {
                let a = self.term()?;
                let is_in = match self.peek() {
                    Some((Tok::In, _)) => true,
                    Some((Tok::Eq, _)) => false,
                    other => return self.error(format!("expected 'in' or '=', found {}", describe(other))),
                };
                self.at += 1;
                let b = self.term()?;
                Ok(if is_in { Raw::In(a, b) } else { Raw::Eq(a, b) })
            }
            None => self.error("unexpected end of input".into()),
        }
    }
}

enum RawTerm {
    Var(RawVar),
    Param(u32),
    Const(hfset::HfSet),
}

enum Raw {
    In(RawTerm, RawTerm),
    Eq(RawTerm, RawTerm),
    Not(Box<Raw>),
    Binary(Op, Box<Raw>, Box<Raw>),
    Exists(RawVar, Box<Raw>),
    Forall(RawVar, Box<Raw>),
}

struct Lower {
    named_base: Var,
}

impl Lower {
    fn var(&self, v: RawVar) -> Var {
        match v {
            RawVar::Num(n) => n,
            RawVar::Named(k) => self.named_base + k,
        }
    }

    fn term(&self, t: RawTerm) -> Term {
        match t {
            RawTerm::Var(v) => Term::Var(self.var(v)),
            RawTerm::Param(n) => Term::Param(n),
            RawTerm::Const(s) => Term::Const(s),
        }
    }

    fn formula(&self, raw: Raw) -> Formula {
        match raw {
            Raw::In(a, b) => Formula::In(self.term(a), self.term(b)),
            Raw::Eq(a, b) => Formula::Eq(self.term(a), self.term(b)),
            Raw::Not(p) => self.formula(*p).not(),
            Raw::Binary(op, p, q) => {
                let (p, q) = (self.formula(*p), self.formula(*q));
                match op {
                    Op::And => p.and(q),
                    Op::Or => p.or(q),
                    Op::Implies => p.implies(q),
                    Op::Iff => p.iff(q),
                }
            }
            Raw::Exists(v, p) => Formula::exists(self.var(v), self.formula(*p)),
            Raw::Forall(v, p) => Formula::forall(self.var(v), self.formula(*p)),
        }
    }
}

fn max_numbered(raw: &Raw) -> Option<Var> {
    let term = |t: &RawTerm| match t {
        RawTerm::Var(RawVar::Num(n)) => Some(*n),
        _ => None,
    };
    let var = |v: &RawVar| match v {
        RawVar::Num(n) => Some(*n),
        RawVar::Named(_) => None,
    };
    match raw {
        Raw::In(a, b) | Raw::Eq(a, b) => term(a).max(term(b)),
        Raw::Not(p) => max_numbered(p),
        Raw::Binary(_, p, q) => max_numbered(p).max(max_numbered(q)),
        Raw::Exists(v, p) | Raw::Forall(v, p) => var(v).max(max_numbered(p)),
    }
}

/// Parses and desugars into the `¬ ∧ ∃` core.
pub fn parse(src: &str) -> Result<Formula, FormulaError> {
    let toks = lex(src)?;
    let mut p = Parser { toks: &toks, at: 0, end: src.len(), names: HashMap::new(), name_order: Vec::new() };
    let raw = p.formula(0)?;
    if p.at != toks.len() {
        return p.error(format!("unexpected {} after formula", describe(p.peek())));
    }
    let named_base = match max_numbered(&raw) {
        Some(n) => n.checked_add(1).ok_or(FormulaError::Syntax { pos: 0, message: "variable index too large".into() })?,
        None => 0,
    };
    if !p.name_order.is_empty() && named_base.checked_add(p.name_order.len() as Var).is_none() {
        return Err(FormulaError::Syntax { pos: 0, message: "variable index too large".into() });
    }
    Ok(Lower { named_base }.formula(raw))
}
