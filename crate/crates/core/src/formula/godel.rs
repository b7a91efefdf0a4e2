//! Gödel numbering of parameter-free formulas.
//!
//! `v_i ∈ v_j` is the list `[0, i, j]`, `v_i = v_j` is `[1, i, j]`, `¬φ` is
//! `[2, g]`, `φ ∧ ψ` is `[3, g, h]` and `∃v_i φ` is `[4, i, g]`. A list
//! `[x1, …, xn]` is coded as `<n, <x1, <x2, … <x_{n-1}, x_n>…>>>`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::coding::{pair_big, unpair_big};

use super::{Formula, FormulaError, Term, Var};

/// Deepest formula accepted by [`godelize`] and [`degodelize`].
pub const MAX_CODE_DEPTH: usize = 256;

fn code_list(items: &[BigUint]) -> Result<BigUint, FormulaError> {
    let (last, init) = items.split_last().expect("lists are nonempty");
    let mut acc = last.clone();
    for x in init.iter().rev() {
        acc = pair_big(x, &acc).ok_or(FormulaError::CodeTooLarge)?;
    }
    pair_big(&BigUint::from(items.len()), &acc).ok_or(FormulaError::CodeTooLarge)
}

fn var_code(t: &Term) -> Result<BigUint, FormulaError> {
    match t {
        Term::Var(i) => Ok(BigUint::from(*i)),
        Term::Param(_) | Term::Const(_) => Err(FormulaError::HasParameters),
    }
}

/// The code of a parameter-free formula. Codes grow doubly exponentially with
/// conjunction nesting; oversized codes give [`FormulaError::CodeTooLarge`].
pub fn godelize(f: &Formula) -> Result<BigUint, FormulaError> {
    if !f.params().is_empty() || f.has_constants() {
        return Err(FormulaError::HasParameters);
    }
    if f.depth() > MAX_CODE_DEPTH {
        return Err(FormulaError::CodeTooLarge);
    }
    code(f)
}

fn code(f: &Formula) -> Result<BigUint, FormulaError> {
    let n = |k: u32| BigUint::from(k);
    match f {
        Formula::In(a, b) => code_list(&[n(0), var_code(a)?, var_code(b)?]),
        Formula::Eq(a, b) => code_list(&[n(1), var_code(a)?, var_code(b)?]),
        Formula::Not(p) => code_list(&[n(2), code(p)?]),
        Formula::And(p, q) => code_list(&[n(3), code(p)?, code(q)?]),
        Formula::Exists(v, p) => code_list(&[n(4), n(*v), code(p)?]),
    }
}

fn decode_list(x: &BigUint) -> Option<Vec<BigUint>> {
    let (len, mut rest) = unpair_big(x);
    let len = len.to_usize().filter(|l| (2..=3).contains(l))?;
    let mut items = Vec::with_capacity(len);
    for _ in 1..len {
        let (head, tail) = unpair_big(&rest);
        items.push(head);
        rest = tail;
    }
    items.push(rest);
    Some(items)
}

/// Inverse of [`godelize`]; `None` for naturals that code no formula.
pub fn degodelize(x: &BigUint) -> Option<Formula> {
    decode(x, 0)
}

fn decode(x: &BigUint, depth: usize) -> Option<Formula> {
    if depth > MAX_CODE_DEPTH {
        return None;
    }
    let items = decode_list(x)?;
    let var = |y: &BigUint| y.to_u32().map(|i: Var| Term::Var(i));
    let tag = items[0].to_u32()?;
    match (tag, items.len()) {
        (0, 3) => Some(Formula::In(var(&items[1])?, var(&items[2])?)),
        (1, 3) => Some(Formula::Eq(var(&items[1])?, var(&items[2])?)),
        (2, 2) => Some(decode(&items[1], depth + 1)?.not()),
        (3, 3) => Some(decode(&items[1], depth + 1)?.and(decode(&items[2], depth + 1)?)),
        (4, 3) => Some(Formula::exists(items[1].to_u32()?, decode(&items[2], depth + 1)?)),
        _ => None,
    }
}
