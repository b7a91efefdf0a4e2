//! The definability operator and the finite constructible levels.
//!
//! `Def X` is the family of sets `X_φ = {x ∈ X : X ⊨ φ(x, p⃗)}` with `φ` a
//! formula and `p⃗` parameters from `X`. For finite `X` every subset is
//! definable by listing its members, so `L_n = V_n` at finite levels.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::formula::{Formula, Term};
use crate::hfset::{self, HfSet};
use crate::truth::{self, TruthError};

/// Largest structure accepted by [`def_certificate`].
pub const MAX_CERTIFICATE_SIZE: usize = 16;
/// Largest structure accepted by [`def_enumerate`].
pub const MAX_ENUMERATE_SIZE: usize = 4;
/// Largest symbol budget accepted by [`def_enumerate`].
pub const MAX_BUDGET: usize = 9;
/// Largest level accepted by [`l_level`].
pub const MAX_L_LEVEL: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Truth(#[from] TruthError),
    #[error("structure has {size} members, more than the supported {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("symbol budget {0} exceeds {MAX_BUDGET}")]
    BudgetTooLarge(usize),
    #[error("level {0} exceeds {MAX_L_LEVEL}")]
    LevelTooLarge(usize),
    #[error("certificate for {0} does not define it")]
    Unverified(HfSet),
}

impl ConstructError {
    pub fn code(&self) -> &'static str {
        match self {
            ConstructError::Truth(e) => e.code(),
            ConstructError::TooLarge { .. } => "TOO_LARGE",
            ConstructError::BudgetTooLarge(_) => "BUDGET_TOO_LARGE",
            ConstructError::LevelTooLarge(_) => "LEVEL_TOO_LARGE",
            ConstructError::Unverified(_) => "UNVERIFIED_CERTIFICATE",
        }
    }
}

/// A formula and parameters defining `subset` over a structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefCertificate {
    pub subset: HfSet,
    /// One free variable, `v0`.
    pub formula: Formula,
    /// Values of the parameter slots `#0, #1, …`.
    pub params: Vec<HfSet>,
}

/// `v0 = #0 ∨ … ∨ v0 = #(k-1)`, or `¬(v0 = v0)` when `k = 0`.
pub fn enumeration_formula(k: usize) -> Formula {
    let eq = |i: usize| Formula::equal(Term::Var(0), Term::Param(i as u32));
    match k {
        0 => Formula::equal(Term::Var(0), Term::Var(0)).not(),
        _ => (1..k).fold(eq(0), |acc, i| acc.or(eq(i))),
    }
}

fn check_size(x: &BTreeSet<HfSet>, limit: usize) -> Result<(), ConstructError> {
    if x.len() > limit {
        return Err(ConstructError::TooLarge { size: x.len(), limit });
    }
    truth::check_transitive(x)?;
    Ok(())
}

fn certify(x: &BTreeSet<HfSet>, members: &[HfSet], mask: u64) -> Result<DefCertificate, ConstructError> {
    let subset = hfset::subset_by_mask(members, mask);
    let params: Vec<HfSet> = subset.iter().cloned().collect();
    let formula = enumeration_formula(params.len());
    let closed = formula.substitute_params(&params).expect("every slot is bound");
    let defined = truth::defined_subset(x, &closed, 0)?;
    if HfSet::from_family(&defined) != subset {
        return Err(ConstructError::Unverified(subset));
    }
    Ok(DefCertificate { subset, formula, params })
}

/// One verified certificate per subset of `x`, in increasing Ackermann order
/// of the subset.
pub fn def_certificate(x: &BTreeSet<HfSet>) -> Result<Vec<DefCertificate>, ConstructError> {
    check_size(x, MAX_CERTIFICATE_SIZE)?;
    let members: Vec<HfSet> = x.iter().cloned().collect();
    (0..1u64 << members.len()).into_par_iter().map(|mask| certify(x, &members, mask)).collect()
}

/// `Def X` through certificates, without keeping the formulas.
pub fn def_set(x: &BTreeSet<HfSet>) -> Result<BTreeSet<HfSet>, ConstructError> {
    check_size(x, MAX_CERTIFICATE_SIZE)?;
    let members: Vec<HfSet> = x.iter().cloned().collect();
    let subsets: Vec<HfSet> = (0..1u64 << members.len())
        .into_par_iter()
        .map(|mask| certify(x, &members, mask).map(|c| c.subset))
        .collect::<Result<_, _>>()?;
    Ok(subsets.into_iter().collect())
}

/// `L_n`: `L_0 = ∅`, `L_{k+1} = Def L_k`.
pub fn l_level(n: usize) -> Result<BTreeSet<HfSet>, ConstructError> {
    if n > MAX_L_LEVEL {
        return Err(ConstructError::LevelTooLarge(n));
    }
    let mut level = BTreeSet::new();
    for _ in 0..n {
        level = def_set(&level)?;
    }
    Ok(level)
}

/// Meaning of a formula over the variables `v0, v1, v2`: which of them occur
/// free, and the set of satisfying assignments in `X^3` as a bitmask.
type Meaning = (u8, u64);

const VARS: usize = 3;

struct Tables {
    n: usize,
    size: usize,
}

impl Tables {
    fn index(&self, a: [usize; VARS]) -> usize {
        a[0] + self.n * (a[1] + self.n * a[2])
    }

    fn assignments(&self) -> impl Iterator<Item = [usize; VARS]> + '_ {
        (0..self.size).map(move |i| [i % self.n, (i / self.n) % self.n, i / (self.n * self.n)])
    }

    fn full(&self) -> u64 {
        if self.size == 64 {
            u64::MAX
        } else {
            (1u64 << self.size) - 1
        }
    }

    fn exists(&self, var: usize, table: u64) -> u64 {
        let mut out = 0;
        for a in self.assignments() {
            let hit = (0..self.n).any(|x| {
                let mut b = a;
                b[var] = x;
                table >> self.index(b) & 1 == 1
            });
            if hit {
                out |= 1 << self.index(a);
            }
        }
        out
    }
}

/// Every `X_φ` with `φ` of at most `budget` symbols, free variable `v0` and
/// parameters from `x`. Formulas use the variables `v0, v1, v2`; a term
/// counts one symbol, as does each connective, and `∃v` counts two.
pub fn def_enumerate(x: &BTreeSet<HfSet>, budget: usize) -> Result<BTreeSet<HfSet>, ConstructError> {
    check_size(x, MAX_ENUMERATE_SIZE)?;
    if budget > MAX_BUDGET {
        return Err(ConstructError::BudgetTooLarge(budget));
    }
    let members: Vec<HfSet> = x.iter().cloned().collect();
    if members.is_empty() {
        // Every formula defines the empty subset of the empty structure.
        return Ok(if budget >= 2 { BTreeSet::from([HfSet::empty()]) } else { BTreeSet::new() });
    }
    let t = Tables { n: members.len(), size: members.len().pow(VARS as u32) };

    // Terms: variables by index, then parameters by member index.
    let terms = VARS + members.len();
    let term_value = |term: usize, a: &[usize; VARS]| if term < VARS { a[term] } else { term - VARS };
    let term_free = |term: usize| if term < VARS { 1u8 << term } else { 0 };

    let mut by_size: Vec<Vec<Meaning>> = vec![Vec::new(); budget + 1];
    let mut seen: HashSet<Meaning> = HashSet::new();
    let mut push = |size: usize, m: Meaning, by_size: &mut Vec<Vec<Meaning>>| {
        if seen.insert(m) {
            by_size[size].push(m);
        }
    };

    if budget >= 2 {
        for a in 0..terms {
            for b in 0..terms {
                let free = term_free(a) | term_free(b);
                let (mut member, mut equal) = (0u64, 0u64);
                for asg in t.assignments() {
                    let (va, vb) = (&members[term_value(a, &asg)], &members[term_value(b, &asg)]);
                    if vb.contains(va) {
                        member |= 1 << t.index(asg);
                    }
                    if va == vb {
                        equal |= 1 << t.index(asg);
                    }
                }
                push(2, (free, member), &mut by_size);
                push(2, (free, equal), &mut by_size);
            }
        }
    }
    for size in 3..=budget {
        let mut fresh = Vec::new();
        for &(free, table) in &by_size[size - 1] {
            fresh.push((free, !table & t.full()));
        }
        for left in 2..size - 1 {
            let right = size - 1 - left;
            if right < 2 || right < left {
                continue;
            }
            for &(f1, t1) in &by_size[left] {
                for &(f2, t2) in &by_size[right] {
                    fresh.push((f1 | f2, t1 & t2));
                }
            }
        }
        if size >= 4 {
            for &(free, table) in &by_size[size - 2] {
                for var in 0..VARS {
                    fresh.push((free & !(1 << var), t.exists(var, table)));
                }
            }
        }
        for m in fresh {
            push(size, m, &mut by_size);
        }
    }

    let mut out = BTreeSet::new();
    for (free, table) in by_size.into_iter().flatten() {
        if free & !1 != 0 {
            continue;
        }
        let chosen = members.iter().enumerate().filter(|(i, _)| table >> t.index([*i, 0, 0]) & 1 == 1);
        out.insert(HfSet::new(chosen.map(|(_, m)| m.clone())));
    }
    Ok(out)
}
