//! Equational abstraction: merging states identified by approximation
//! equations.

use super::matching::{join, Matcher, StateSubst};
use crate::automaton::{Lta, State};
use crate::rewriting::EquationSet;
use crate::solver::{solve_with, ConstraintSystem, SolverError, StrictMode};
use std::collections::BTreeSet;

/// Finds one pair of distinct states recognising the two sides of some
/// equation under a common substitution whose guard is satisfiable.
fn find_merge(a: &Lta, equations: &EquationSet, mode: StrictMode) -> Result<Option<(State, State)>, SolverError> {
    let runner = a.runner();
    let matcher = Matcher::new(&runner);
    for eq in &equations.equations {
        let lhs = eq.lhs.abstracted();
        let rhs = eq.rhs.abstracted();
        let system = ConstraintSystem::from_predicates(&eq.conditions, mode)?;
        let left: Vec<(State, BTreeSet<StateSubst>)> =
            a.states().iter().map(|q| (q.clone(), matcher.matching(&lhs, q))).collect();
        for q2 in a.states() {
            for sv in matcher.matching(&rhs, q2) {
                for (q1, sus) in &left {
                    if q1 == q2 {
                        continue;
                    }
                    for su in sus {
                        let Some(sigma) = join(su, &sv) else { continue };
                        if !solve_with(&runner, &sigma, &system).is_empty() {
                            return Ok(Some((q1.clone(), q2.clone())));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Merges states until no equation identifies two distinct states. The
/// lower state in the natural order survives each merge. Returns the merges
/// as `(kept, removed)` pairs, in order.
pub fn apply_equations(
    a: &mut Lta,
    equations: &EquationSet,
    mode: StrictMode,
) -> Result<Vec<(State, State)>, SolverError> {
    let mut merges = Vec::new();
    while let Some((p, q)) = find_merge(a, equations, mode)? {
        let (keep, gone) = if p < q { (p, q) } else { (q, p) };
        a.merge_states(&keep, &gone);
        merges.push((keep, gone));
    }
    Ok(merges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Transition;
    use crate::lattice::Interval;
    use crate::rewriting::{Equation, Predicate, Relation};
    use crate::term::{Alphabet, BuiltinOp, Term};

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }

    fn increment_chain() -> Lta {
        Lta::build(
            Alphabet::new([("f", 1)]),
            [
                Transition::lambda(iv("[1,1]"), "q1"),
                Transition::lambda(iv("[2,2]"), "q2"),
                Transition::ground("f", &["q2"], "qf"),
                Transition::ground("+", &["q2", "q1"], "q3"),
                Transition::ground("+", &["q3", "q1"], "q4"),
                Transition::ground("+", &["q4", "q1"], "q5"),
                Transition::lambda(iv("[3,3]"), "q3"),
                Transition::lambda(iv("[4,4]"), "q4"),
                Transition::lambda(iv("[5,5]"), "q5"),
            ],
            [State::from("qf")],
        )
        .unwrap()
    }

    fn increment(guard: i64) -> EquationSet {
        let x = || Term::var("x");
        let eq = Equation::new(
            x(),
            Term::op(BuiltinOp::Add, x(), Term::int(1)),
            vec![Predicate::new(x(), Relation::Gt, Term::int(guard))],
        )
        .unwrap();
        EquationSet { name: "E".into(), equations: vec![eq] }
    }

    #[test]
    fn guarded_increment_merges_tail_of_chain() {
        let mut a = increment_chain();
        let merges = apply_equations(&mut a, &increment(3), StrictMode::StrictInt).unwrap();
        assert_eq!(merges, vec![(State::from("q4"), State::from("q5"))]);
        assert!(a.transitions().contains(&Transition::ground("+", &["q4", "q1"], "q4")));
        assert!(!a.states().contains(&State::from("q5")));
    }

    #[test]
    fn unsatisfiable_guard_merges_nothing() {
        let mut a = increment_chain();
        let before = a.clone();
        assert!(apply_equations(&mut a, &increment(100), StrictMode::StrictInt).unwrap().is_empty());
        assert_eq!(a, before);
    }
}
