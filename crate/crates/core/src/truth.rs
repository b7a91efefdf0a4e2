//! Truth of `∈`-formulas in finite transitive structures.
//!
//! A Tarski truth set (TTS) for a closed `φ` over `X` is a set `τ` of closed
//! instances of subformulas of `φ` (free variables replaced by members of
//! `X`) such that
//!
//! * an atom is in `τ` iff it is true,
//! * `¬ψ ∈ τ` iff `ψ ∉ τ`,
//! * `ψ ∧ χ ∈ τ` iff both are in `τ`,
//! * `∃v ψ ∈ τ` iff `ψ[v := x] ∈ τ` for some `x ∈ X`.
//!
//! It exists and is unique; `X ⊨ φ` means `φ ∈ τ`. The same relation is also
//! computed by plain recursion, and the two must agree.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::digraph::{self, Digraph, DigraphError};
use crate::formula::{DTerm, DigraphFormula, Formula, Term, Var};
use crate::hfset::{self, encode_set, HfSet};

/// Largest rank bound accepted by [`models_interp_bounded`].
pub const MAX_RANK_BOUND: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TruthError {
    #[error("structure is not transitive: {missing} is an element of {member} but not in the structure")]
    NotTransitive { member: HfSet, missing: HfSet },
    #[error("formula is not closed (free variables {vars:?}, parameters {params:?})")]
    NotClosed { vars: Vec<Var>, params: Vec<u32> },
    #[error("constant {0} is not in the structure")]
    ParameterOutsideStructure(HfSet),
    #[error("argument {index} has rank {rank}, outside the bound {bound}")]
    RankTooLarge { index: usize, rank: u32, bound: usize },
    #[error("argument {0} is missing")]
    MissingArgument(u32),
    #[error(transparent)]
    Digraph(#[from] DigraphError),
}

impl TruthError {
    pub fn code(&self) -> &'static str {
        match self {
            TruthError::NotTransitive { .. } => "NOT_TRANSITIVE",
            TruthError::NotClosed { .. } => "NOT_CLOSED",
            TruthError::ParameterOutsideStructure(_) => "PARAMETER_OUTSIDE_STRUCTURE",
            TruthError::RankTooLarge { .. } => "RANK_TOO_LARGE",
            TruthError::MissingArgument(_) => "MISSING_ARGUMENT",
            TruthError::Digraph(e) => e.code(),
        }
    }
}

/// A set of closed formula instances.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TruthSet {
    pub members: BTreeSet<Formula>,
}

impl TruthSet {
    pub fn contains(&self, f: &Formula) -> bool {
        self.members.contains(f)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn check_transitive(x: &BTreeSet<HfSet>) -> Result<(), TruthError> {
    for member in x {
        if let Some(missing) = member.iter().find(|e| !x.contains(*e)) {
            return Err(TruthError::NotTransitive { member: member.clone(), missing: missing.clone() });
        }
    }
    Ok(())
}

fn check_input(x: &BTreeSet<HfSet>, f: &Formula) -> Result<(), TruthError> {
    check_transitive(x)?;
    let vars = f.free_vars();
    let params = f.params();
    if !vars.is_empty() || !params.is_empty() {
        return Err(TruthError::NotClosed { vars: vars.into_iter().collect(), params: params.into_iter().collect() });
    }
    if let Some(c) = f.constants().into_iter().find(|c| !x.contains(c)) {
        return Err(TruthError::ParameterOutsideStructure(c));
    }
    Ok(())
}

fn atom_value(a: &Term, b: &Term, is_in: bool) -> bool {
    match (a, b) {
        (Term::Const(a), Term::Const(b)) => {
            if is_in {
                b.contains(a)
            } else {
                a == b
            }
        }
        _ => unreachable!("instances are closed"),
    }
}

/// `Form_φ[X]`: every subformula of `f` with its free variables replaced by
/// members of `x` in all possible ways.
pub fn instances(x: &BTreeSet<HfSet>, f: &Formula) -> BTreeSet<Formula> {
    let members: Vec<&HfSet> = x.iter().collect();
    let mut out = BTreeSet::new();
    for sub in f.subformulas() {
        let vars: Vec<Var> = sub.free_vars().into_iter().collect();
        let mut choice = vec![0usize; vars.len()];
        if !vars.is_empty() && members.is_empty() {
            continue;
        }
        loop {
            let mut inst = sub.clone();
            for (v, &c) in vars.iter().zip(&choice) {
                inst = inst.substitute_var(*v, &Term::Const(members[c].clone()));
            }
            out.insert(inst);
            // Odometer over X^vars.
            let mut i = 0;
            while i < choice.len() {
                choice[i] += 1;
                if choice[i] < members.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
        }
    }
    out
}

/// The truth set of `f` over `x`, built bottom-up by formula length.
pub fn build_tts(x: &BTreeSet<HfSet>, f: &Formula) -> Result<TruthSet, TruthError> {
    check_input(x, f)?;
    let mut all: Vec<Formula> = instances(x, f).into_iter().collect();
    all.sort_by_key(Formula::symbol_count);
    let mut truth: HashMap<Formula, bool> = HashMap::with_capacity(all.len());
    for inst in &all {
        let value = match inst {
            Formula::In(a, b) => atom_value(a, b, true),
            Formula::Eq(a, b) => atom_value(a, b, false),
            Formula::Not(p) => !truth[p.as_ref()],
            Formula::And(p, q) => truth[p.as_ref()] && truth[q.as_ref()],
            Formula::Exists(v, p) => x.iter().any(|c| truth[&p.substitute_var(*v, &Term::Const(c.clone()))]),
        };
        truth.insert(inst.clone(), value);
    }
    Ok(TruthSet { members: all.into_iter().filter(|i| truth[i]).collect() })
}

/// Whether `tau` is a truth set for `f` over `x`.
pub fn check_tts(x: &BTreeSet<HfSet>, f: &Formula, tau: &TruthSet) -> Result<bool, TruthError> {
    check_input(x, f)?;
    let all = instances(x, f);
    if !tau.members.is_subset(&all) {
        return Ok(false);
    }
    Ok(all.iter().all(|inst| {
        let expected = match inst {
            Formula::In(a, b) => atom_value(a, b, true),
            Formula::Eq(a, b) => atom_value(a, b, false),
            Formula::Not(p) => !tau.contains(p),
            Formula::And(p, q) => tau.contains(p) && tau.contains(q),
            Formula::Exists(v, p) => x.iter().any(|c| tau.contains(&p.substitute_var(*v, &Term::Const(c.clone())))),
        };
        tau.contains(inst) == expected
    }))
}

/// `X ⊨ φ` through the truth set.
pub fn models(x: &BTreeSet<HfSet>, f: &Formula) -> Result<bool, TruthError> {
    Ok(build_tts(x, f)?.contains(f))
}

/// `X ⊨ φ` by direct recursion.
pub fn models_direct(x: &BTreeSet<HfSet>, f: &Formula) -> Result<bool, TruthError> {
    check_input(x, f)?;
    let universe: Vec<HfSet> = x.iter().cloned().collect();
    Ok(eval(&universe, f, &mut Vec::new()))
}

/// Evaluates `f` with quantifiers over `universe` and free variables taken
/// from `env`. Nothing is required of the universe; constants need not lie in
/// it. Parameters must already be substituted.
pub fn evaluate(universe: &BTreeSet<HfSet>, f: &Formula, env: &BTreeMap<Var, HfSet>) -> Result<bool, TruthError> {
    let unbound: Vec<Var> = f.free_vars().into_iter().filter(|v| !env.contains_key(v)).collect();
    let params: Vec<u32> = f.params().into_iter().collect();
    if !unbound.is_empty() || !params.is_empty() {
        return Err(TruthError::NotClosed { vars: unbound, params });
    }
    let universe: Vec<HfSet> = universe.iter().cloned().collect();
    let mut stack: Vec<(Var, HfSet)> = env.iter().map(|(v, s)| (*v, s.clone())).collect();
    Ok(eval(&universe, f, &mut stack))
}

/// `{x ∈ universe : universe ⊨ f(x)}` for `f` whose only free variable is
/// `var` (or none). Parameters must already be substituted.
pub fn defined_subset(universe: &BTreeSet<HfSet>, f: &Formula, var: Var) -> Result<BTreeSet<HfSet>, TruthError> {
    let unbound: Vec<Var> = f.free_vars().into_iter().filter(|v| *v != var).collect();
    let params: Vec<u32> = f.params().into_iter().collect();
    if !unbound.is_empty() || !params.is_empty() {
        return Err(TruthError::NotClosed { vars: unbound, params });
    }
    let members: Vec<HfSet> = universe.iter().cloned().collect();
    let mut env = Vec::with_capacity(8);
    let mut out = BTreeSet::new();
    for x in &members {
        env.push((var, x.clone()));
        if eval(&members, f, &mut env) {
            out.insert(x.clone());
        }
        env.pop();
    }
    Ok(out)
}

fn lookup<'a>(t: &'a Term, env: &'a [(Var, HfSet)]) -> &'a HfSet {
    match t {
        Term::Const(s) => s,
        Term::Var(v) => &env.iter().rev().find(|(w, _)| w == v).expect("bound variable").1,
        Term::Param(_) => unreachable!("parameters are substituted before evaluation"),
    }
}

fn eval(universe: &[HfSet], f: &Formula, env: &mut Vec<(Var, HfSet)>) -> bool {
    match f {
        Formula::In(a, b) => lookup(b, env).contains(lookup(a, env)),
        Formula::Eq(a, b) => lookup(a, env) == lookup(b, env),
        Formula::Not(p) => !eval(universe, p, env),
        Formula::And(p, q) => eval(universe, p, env) && eval(universe, q, env),
        Formula::Exists(v, p) => universe.iter().any(|c| {
            env.push((*v, c.clone()));
            let holds = eval(universe, p, env);
            env.pop();
            holds
        }),
    }
}

/// Evaluates a translated formula over WFEV digraphs, with quantifiers ranging
/// over the canonical encodings of the members of `V_rank_bound`.
///
/// `args[i]` is the value of both the free variable `V_i` and the argument
/// slot `A_i`. Every argument must realize a member of `V_rank_bound`.
/// Isomorphism and membership are decided on the digraphs themselves.
pub fn models_interp_bounded(phi: &DigraphFormula, args: &[Digraph], rank_bound: usize) -> Result<bool, TruthError> {
    if rank_bound > MAX_RANK_BOUND {
        return Err(TruthError::RankTooLarge { index: 0, rank: rank_bound as u32, bound: MAX_RANK_BOUND });
    }
    for (index, a) in args.iter().enumerate() {
        let rank = hfset::collapse(a)?.value.rank();
        if rank as usize >= rank_bound {
            return Err(TruthError::RankTooLarge { index, rank, bound: rank_bound });
        }
    }
    let universe: Vec<Digraph> =
        hfset::v_level(rank_bound).expect("bound checked above").iter().map(encode_set).collect();
    let mut env: Vec<(Var, Digraph)> = Vec::new();
    let mut free = Vec::new();
    free_dvars(phi, &mut Vec::new(), &mut free);
    for v in free {
        let arg = args.get(v as usize).ok_or(TruthError::MissingArgument(v))?;
        env.push((v, arg.clone()));
    }
    eval_digraph(phi, &universe, args, &mut env)
}

fn free_dvars(phi: &DigraphFormula, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
    let mut term = |t: &DTerm, bound: &Vec<Var>| {
        if let DTerm::Var(v) = t {
            if !bound.contains(v) && !out.contains(v) {
                out.push(*v);
            }
        }
    };
    match phi {
        DigraphFormula::Iso(a, b) | DigraphFormula::Mem(a, b) => {
            term(a, bound);
            term(b, bound);
        }
        DigraphFormula::Not(p) => free_dvars(p, bound, out),
        DigraphFormula::And(p, q) => {
            free_dvars(p, bound, out);
            free_dvars(q, bound, out);
        }
        DigraphFormula::ExistsWfev(v, p) => {
            bound.push(*v);
            free_dvars(p, bound, out);
            bound.pop();
        }
    }
}

fn dlookup<'a>(t: &'a DTerm, args: &'a [Digraph], env: &'a [(Var, Digraph)]) -> Result<&'a Digraph, TruthError> {
    match t {
        DTerm::Const(g) => Ok(g),
        DTerm::Arg(i) => args.get(*i as usize).ok_or(TruthError::MissingArgument(*i)),
        DTerm::Var(v) => Ok(&env.iter().rev().find(|(w, _)| w == v).expect("free variables are bound").1),
    }
}

fn eval_digraph(
    phi: &DigraphFormula,
    universe: &[Digraph],
    args: &[Digraph],
    env: &mut Vec<(Var, Digraph)>,
) -> Result<bool, TruthError> {
    Ok(match phi {
        DigraphFormula::Iso(a, b) => digraph::isomorphic(dlookup(a, args, env)?, dlookup(b, args, env)?)?.is_some(),
        DigraphFormula::Mem(a, b) => digraph::is_member(dlookup(a, args, env)?, dlookup(b, args, env)?)?,
        DigraphFormula::Not(p) => !eval_digraph(p, universe, args, env)?,
        DigraphFormula::And(p, q) => eval_digraph(p, universe, args, env)? && eval_digraph(q, universe, args, env)?,
        DigraphFormula::ExistsWfev(v, p) => {
            for d in universe {
                env.push((*v, d.clone()));
                let holds = eval_digraph(p, universe, args, env);
                env.pop();
                if holds? {
                    return Ok(true);
                }
            }
            false
        }
    })
}
