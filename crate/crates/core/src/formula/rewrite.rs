//! Relativization and parameter elimination.

use super::{Formula, FormulaError, Term, Var};

/// `φ^X`: every `∃v ψ` becomes `∃v (v ∈ #slot ∧ ψ^X)`.
pub fn relativize(f: &Formula, slot: u32) -> Formula {
    relativize_to(f, &Term::Param(slot))
}

fn relativize_to(f: &Formula, bound: &Term) -> Formula {
    match f {
        Formula::In(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(p) => relativize_to(p, bound).not(),
        Formula::And(p, q) => relativize_to(p, bound).and(relativize_to(q, bound)),
        Formula::Exists(v, p) => {
            Formula::exists(*v, Formula::member(Term::Var(*v), bound.clone()).and(relativize_to(p, bound)))
        }
    }
}

/// Replaces the parameter of `phi` by a definition of it.
///
/// `phi` has at most one parameter slot besides `level_slot`, standing for a
/// set `p`. `defining` has exactly one free variable `z` and no parameters
/// except `level_slot`, and defines `p` over the level: `p = {z ∈ L : L ⊨ ψ(z)}`
/// with `L` the value of `#level_slot`. The result is
///
/// ```text
/// ∃p (∀z (z ∈ p ↔ (z ∈ #level ∧ ψ^{#level}(z))) ∧ φ(p, …))
/// ```
///
/// whose only parameter is `#level_slot`. Parameter-free input is returned
/// unchanged.
pub fn eliminate_params(phi: &Formula, defining: &Formula, level_slot: u32) -> Result<Formula, FormulaError> {
    let mut slots = phi.params();
    slots.remove(&level_slot);
    let Some(&slot) = slots.iter().next() else {
        return Ok(phi.clone());
    };
    if slots.len() > 1 {
        return Err(FormulaError::ArityMismatch { what: "parameters", expected: 1, found: slots.len() });
    }
    let free = defining.free_vars();
    if free.len() != 1 {
        return Err(FormulaError::ArityMismatch { what: "variables", expected: 1, found: free.len() });
    }
    let mut defining_params = defining.params();
    defining_params.remove(&level_slot);
    if !defining_params.is_empty() {
        return Err(FormulaError::ArityMismatch { what: "parameters", expected: 0, found: defining_params.len() });
    }

    let fresh: Var = phi.all_vars().union(&defining.all_vars()).max().map_or(0, |m| m + 1);
    let (p, z) = (fresh, fresh + 1);
    let old_z = *free.iter().next().expect("one free variable");
    let psi = relativize(&defining.substitute_var(old_z, &Term::Var(z)), level_slot);
    let psi_prime = Formula::member(Term::Var(z), Term::Param(level_slot)).and(psi);
    let extension = Formula::forall(z, Formula::member(Term::Var(z), Term::Var(p)).iff(psi_prime));
    Ok(Formula::exists(p, extension.and(phi.replace_param(slot, &Term::Var(p)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn relativize_examples() {
        assert_eq!(relativize(&parse("E v0. v0 = v0").unwrap(), 0), parse("E v0. (v0 in #0 & v0 = v0)").unwrap());
        let qf = parse("(v0 in v1 & !v1 = #3)").unwrap();
        assert_eq!(relativize(&qf, 0), qf);
        assert_eq!(
            relativize(&parse("E v0. E v1. v0 in v1").unwrap(), 2),
            parse("E v0. (v0 in #2 & E v1. (v1 in #2 & v0 in v1))").unwrap()
        );
    }

    #[test]
    fn elimination_shape() {
        let phi = parse("v0 in #0").unwrap();
        let psi = parse("v0 = v0").unwrap();
        let out = eliminate_params(&phi, &psi, 1).unwrap();
        assert_eq!(out.params(), [1].into());
        assert_eq!(out.free_vars(), [0].into());
        let expected = Formula::exists(
            1,
            Formula::forall(
                2,
                Formula::member(Term::Var(2), Term::Var(1))
                    .iff(Formula::member(Term::Var(2), Term::Param(1)).and(parse("v2 = v2").unwrap())),
            )
            .and(parse("v0 in v1").unwrap()),
        );
        assert_eq!(out, expected);
    }

    #[test]
    fn elimination_errors_and_identity() {
        let phi = parse("v0 in #0").unwrap();
        let two_free = parse("v0 in v1").unwrap();
        assert!(matches!(eliminate_params(&phi, &two_free, 1), Err(FormulaError::ArityMismatch { .. })));
        let plain = parse("E v0. v0 in v1").unwrap();
        assert_eq!(eliminate_params(&plain, &parse("v0 = v0").unwrap(), 1).unwrap(), plain);
        let two_params = parse("(v0 in #0 & v0 in #2)").unwrap();
        assert!(eliminate_params(&two_params, &parse("v0 = v0").unwrap(), 1).is_err());
    }
}
