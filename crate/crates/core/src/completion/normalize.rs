//! Normalisation of right-hand side instances into automaton transitions.

use crate::automaton::{AutomatonError, Head, Lta, State, Transition};
use crate::lattice::{AtomicLattice, Interval};
use crate::term::Term;
use std::collections::{BTreeMap, BTreeSet};

/// Source of fresh state names `q!0`, `q!1`, ...
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FreshStates {
    next: usize,
}

impl FreshStates {
    /// Starts past every `q!n` name already used by `a`.
    pub fn after(a: &Lta) -> Self {
        let next = a
            .states()
            .iter()
            .filter_map(|q| q.name().strip_prefix("q!")?.parse::<usize>().ok())
            .map(|n| n + 1)
            .max()
            .unwrap_or(0);
        FreshStates { next }
    }

    pub fn next(&mut self, a: &Lta) -> State {
        loop {
            let q = State::new(format!("q!{}", self.next));
            self.next += 1;
            if !a.states().contains(&q) {
                return q;
            }
        }
    }
}

/// States whose incoming transitions are a single lambda plus, possibly,
/// builtin ground transitions. Their language of evaluated terms is exactly
/// the atoms of that lambda, so they can stand for the value itself.
pub fn value_exact_states(a: &Lta) -> BTreeMap<State, Interval> {
    let mut values: BTreeMap<&State, Vec<&Interval>> = BTreeMap::new();
    let mut blocked: BTreeSet<&State> = BTreeSet::new();
    for t in a.transitions() {
        match t {
            Transition::Lambda { value, target } => values.entry(target).or_default().push(value),
            Transition::Ground { head: Head::Passive(_), target, .. } => {
                blocked.insert(target);
            }
            Transition::Ground { head: Head::Builtin(_), .. } => {}
            Transition::Epsilon { to, .. } => {
                blocked.insert(to);
            }
        }
    }
    values
        .into_iter()
        .filter(|(q, vs)| vs.len() == 1 && !blocked.contains(q))
        .map(|(q, vs)| (q.clone(), vs[0].clone()))
        .collect()
}

/// The lowest value-exact state carrying exactly `v`.
pub fn value_exact_state(a: &Lta, v: &Interval) -> Option<State> {
    value_exact_states(a).into_iter().find(|(_, w)| w == v).map(|(q, _)| q)
}

/// Adds transitions so that `t →* target`, reusing existing states where a
/// subterm is already recognised exactly, and returns the new transitions.
///
/// Lattice leaves reuse a value-exact state or get a dedicated state named
/// after the value (`q[1,1]`). Compound subterms reuse the target of an
/// existing transition with the same head and argument states. State
/// leaves at the top become epsilon transitions.
pub fn normalize(
    a: &mut Lta,
    t: &Term,
    target: &State,
    fresh: &mut FreshStates,
) -> Result<Vec<Transition>, AutomatonError> {
    let mut added = Vec::new();
    let top = match t {
        Term::Val(v) => Transition::Lambda { value: v.clone(), target: target.clone() },
        Term::Int(k) => Transition::Lambda { value: Interval::alpha(k), target: target.clone() },
        Term::State(p) => Transition::Epsilon { from: p.clone(), to: target.clone() },
        Term::Var(x) => return Err(AutomatonError::NotGround(x.clone())),
        Term::App { args, .. } | Term::Op { args, .. } => {
            let mut qs = Vec::with_capacity(args.len());
            for arg in args {
                qs.push(state_for(a, arg, fresh, &mut added)?);
            }
            Transition::Ground { head: head_of(t), args: qs, target: target.clone() }
        }
    };
    if a.add_transition(top.clone())? {
        added.push(top);
    }
    Ok(added)
}

fn head_of(t: &Term) -> Head {
    match t {
        Term::App { head, .. } => Head::Passive(head.clone()),
        Term::Op { op, .. } => Head::Builtin(*op),
        _ => unreachable!("only compound terms have heads"),
    }
}

fn state_for(
    a: &mut Lta,
    t: &Term,
    fresh: &mut FreshStates,
    added: &mut Vec<Transition>,
) -> Result<State, AutomatonError> {
    match t {
        Term::State(p) => Ok(p.clone()),
        Term::Var(x) => Err(AutomatonError::NotGround(x.clone())),
        Term::Val(_) | Term::Int(_) => {
            let v = match t {
                Term::Int(k) => Interval::alpha(k),
                Term::Val(v) => v.clone(),
                _ => unreachable!(),
            };
            if let Some(q) = value_exact_state(a, &v) {
                return Ok(q);
            }
            let named = State::new(format!("q{v}"));
            let q = if a.states().contains(&named) { fresh.next(a) } else { named };
            let tr = Transition::Lambda { value: v, target: q.clone() };
            a.add_transition(tr.clone())?;
            added.push(tr);
            Ok(q)
        }
        Term::App { args, .. } | Term::Op { args, .. } => {
            let mut qs = Vec::with_capacity(args.len());
            for arg in args {
                qs.push(state_for(a, arg, fresh, added)?);
            }
            let head = head_of(t);
            let existing =
                a.grounds().filter(|(h, xs, _)| **h == head && *xs == qs.as_slice()).map(|(_, _, q)| q).min();
            if let Some(q) = existing {
                return Ok(q.clone());
            }
            let q = fresh.next(a);
            let tr = Transition::Ground { head, args: qs, target: q.clone() };
            a.add_transition(tr.clone())?;
            added.push(tr);
            Ok(q)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Alphabet, BuiltinOp};

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }

    fn delta0() -> Lta {
        let alphabet = Alphabet::new([("f", 1), ("cons", 2), ("nil", 0)]);
        Lta::build(
            alphabet,
            [Transition::lambda(iv("[1,2]"), "q1"), Transition::ground("f", &["q1"], "q2")],
            [State::from("q2")],
        )
        .unwrap()
    }

    #[test]
    fn normalises_first_running_step() {
        let mut a = delta0();
        let mut fresh = FreshStates::after(&a);
        let rhs = Term::app(
            "cons",
            vec![Term::state("q1"), Term::app("f", vec![Term::op(BuiltinOp::Add, Term::state("q1"), Term::int(1))])],
        );
        let target = fresh.next(&a);
        let added = normalize(&mut a, &rhs, &target, &mut fresh).unwrap();
        let shown: BTreeSet<String> = added.iter().map(ToString::to_string).collect();
        let expected: BTreeSet<String> =
            ["[1,1] -> q[1,1]", "+(q1,q[1,1]) -> q!1", "f(q!1) -> q!2", "cons(q1,q!2) -> q!0"]
                .iter()
                .map(|s| s.to_string())
                .collect();
        assert_eq!(shown, expected);
    }

    #[test]
    fn leaves_become_lambdas() {
        let mut a = delta0();
        let mut fresh = FreshStates::after(&a);
        let q = State::from("p");
        let added = normalize(&mut a, &Term::val(iv("[3,3]")), &q, &mut fresh).unwrap();
        assert_eq!(added, vec![Transition::lambda(iv("[3,3]"), "p")]);
        let added = normalize(&mut a, &Term::int(5), &q, &mut fresh).unwrap();
        assert_eq!(added, vec![Transition::lambda(iv("[5,5]"), "p")]);
    }

    #[test]
    fn interval_leaf_reuses_value_exact_state() {
        let mut a = delta0();
        let mut fresh = FreshStates::after(&a);
        let t = Term::app("f", vec![Term::val(iv("[1,2]"))]);
        let added = normalize(&mut a, &t, &State::from("p"), &mut fresh).unwrap();
        assert_eq!(added, vec![Transition::ground("f", &["q1"], "p")]);
    }

    #[test]
    fn fresh_names_skip_existing() {
        let mut a = delta0();
        a.add_transition(Transition::lambda(iv("[0,0]"), "q!4")).unwrap();
        let mut fresh = FreshStates::after(&a);
        assert_eq!(fresh.next(&a), State::from("q!5"));
    }

    #[test]
    fn value_exact_ignores_states_with_passive_inputs() {
        let mut a = delta0();
        a.add_transition(Transition::lambda(iv("[7,7]"), "q2")).unwrap();
        let exact = value_exact_states(&a);
        assert_eq!(exact.get(&State::from("q1")), Some(&iv("[1,2]")));
        assert!(!exact.contains_key(&State::from("q2")));
    }
}
