//! Lattice tree automata: transitions, runs and membership.

mod dot;
mod ops;
mod state;

pub use ops::Inclusion;
pub(crate) use ops::{product as tuples_of_choices, tuples as tuples_of};
pub use state::State;

use crate::lattice::{AtomicLattice, Interval, Lattice};
use crate::term::{Alphabet, BuiltinOp, Term, TermError};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Head symbol of a ground transition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Head {
    Passive(String),
    Builtin(BuiltinOp),
}

impl Head {
    pub fn passive(name: impl Into<String>) -> Self {
        Head::Passive(name.into())
    }

    pub fn name(&self) -> &str {
        match self {
            Head::Passive(n) => n,
            Head::Builtin(op) => op.name(),
        }
    }
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Transition {
    /// `value -> target`, with a nonempty value.
    Lambda { value: Interval, target: State },
    /// `head(args) -> target`.
    Ground { head: Head, args: Vec<State>, target: State },
    /// `from -> to`: whatever reaches `from` also reaches `to`.
    Epsilon { from: State, to: State },
}

impl Transition {
    pub fn lambda(value: Interval, target: impl Into<State>) -> Self {
        Transition::Lambda { value, target: target.into() }
    }

    pub fn ground(head: &str, args: &[&str], target: impl Into<State>) -> Self {
        let head = match BuiltinOp::from_name(head) {
            Some(op) => Head::Builtin(op),
            None => Head::Passive(head.to_string()),
        };
        Transition::Ground { head, args: args.iter().map(|a| State::from(*a)).collect(), target: target.into() }
    }

    pub fn epsilon(from: impl Into<State>, to: impl Into<State>) -> Self {
        Transition::Epsilon { from: from.into(), to: to.into() }
    }

    pub fn target(&self) -> &State {
        match self {
            Transition::Lambda { target, .. } | Transition::Ground { target, .. } => target,
            Transition::Epsilon { to, .. } => to,
        }
    }

    pub fn states(&self) -> Vec<&State> {
        match self {
            Transition::Lambda { target, .. } => vec![target],
            Transition::Ground { args, target, .. } => args.iter().chain(std::iter::once(target)).collect(),
            Transition::Epsilon { from, to } => vec![from, to],
        }
    }

    /// Same transition with every state renamed through `f`.
    pub fn map_states(&self, f: impl Fn(&State) -> State) -> Transition {
        match self {
            Transition::Lambda { value, target } => Transition::Lambda { value: value.clone(), target: f(target) },
            Transition::Ground { head, args, target } => {
                Transition::Ground { head: head.clone(), args: args.iter().map(&f).collect(), target: f(target) }
            }
            Transition::Epsilon { from, to } => Transition::Epsilon { from: f(from), to: f(to) },
        }
    }

    pub fn with_target(&self, target: State) -> Transition {
        match self {
            Transition::Lambda { value, .. } => Transition::Lambda { value: value.clone(), target },
            Transition::Ground { head, args, .. } => {
                Transition::Ground { head: head.clone(), args: args.clone(), target }
            }
            Transition::Epsilon { from, .. } => Transition::Epsilon { from: from.clone(), to: target },
        }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transition::Lambda { value, target } => write!(f, "{value} -> {target}"),
            Transition::Ground { head, args, target } if args.is_empty() => write!(f, "{head} -> {target}"),
            Transition::Ground { head, args, target } => {
                let args: Vec<&str> = args.iter().map(State::name).collect();
                write!(f, "{head}({}) -> {target}", args.join(","))
            }
            Transition::Epsilon { from, to } => write!(f, "{from} -> {to}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("lambda transition to {0} carries the empty value")]
    BottomLambda(State),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` expects {expected} arguments, found {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("membership is defined for terms with atom leaves, found {0}")]
    NonAtomLeaf(String),
    #[error("expected a ground term, found variable `{0}`")]
    NotGround(String),
    #[error("operation requires a deterministic automaton")]
    NonDeterministic,
    #[error(transparent)]
    Term(#[from] TermError),
}

/// A lattice tree automaton over integer intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lta {
    alphabet: Alphabet,
    states: BTreeSet<State>,
    finals: BTreeSet<State>,
    transitions: BTreeSet<Transition>,
}

impl Lta {
    pub fn new(alphabet: Alphabet) -> Self {
        Lta { alphabet, states: BTreeSet::new(), finals: BTreeSet::new(), transitions: BTreeSet::new() }
    }

    /// Builds an automaton, validating every transition.
    pub fn build(
        alphabet: Alphabet,
        transitions: impl IntoIterator<Item = Transition>,
        finals: impl IntoIterator<Item = State>,
    ) -> Result<Self, AutomatonError> {
        let mut a = Lta::new(alphabet);
        for t in transitions {
            a.add_transition(t)?;
        }
        for q in finals {
            a.add_final(q);
        }
        Ok(a)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn set_alphabet(&mut self, alphabet: Alphabet) {
        self.alphabet = alphabet;
    }

    pub fn states(&self) -> &BTreeSet<State> {
        &self.states
    }

    pub fn finals(&self) -> &BTreeSet<State> {
        &self.finals
    }

    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }

    pub fn is_final(&self, q: &State) -> bool {
        self.finals.contains(q)
    }

    pub fn add_state(&mut self, q: State) -> bool {
        self.states.insert(q)
    }

    pub fn add_final(&mut self, q: State) {
        self.states.insert(q.clone());
        self.finals.insert(q);
    }

    pub fn set_finals(&mut self, finals: BTreeSet<State>) {
        self.states.extend(finals.iter().cloned());
        self.finals = finals;
    }

    /// Adds a transition and its states. Returns whether it was new.
    pub fn add_transition(&mut self, t: Transition) -> Result<bool, AutomatonError> {
        self.check_transition(&t)?;
        for q in t.states() {
            if !self.states.contains(q) {
                self.states.insert(q.clone());
            }
        }
        Ok(self.transitions.insert(t))
    }

    pub fn remove_transition(&mut self, t: &Transition) -> bool {
        self.transitions.remove(t)
    }

    fn check_transition(&self, t: &Transition) -> Result<(), AutomatonError> {
        match t {
            Transition::Lambda { value, target } if value.is_bottom() => {
                Err(AutomatonError::BottomLambda(target.clone()))
            }
            Transition::Ground { head: Head::Passive(name), args, .. } => {
                let expected =
                    self.alphabet.passive_arity(name).ok_or_else(|| AutomatonError::UnknownSymbol(name.clone()))?;
                if expected != args.len() {
                    return Err(AutomatonError::ArityMismatch { symbol: name.clone(), expected, found: args.len() });
                }
                Ok(())
            }
            Transition::Ground { head: Head::Builtin(op), args, .. } => {
                if !self.alphabet.has_builtin(*op) {
                    return Err(AutomatonError::UnknownSymbol(op.name().to_string()));
                }
                if args.len() != op.arity() {
                    return Err(AutomatonError::ArityMismatch {
                        symbol: op.name().to_string(),
                        expected: op.arity(),
                        found: args.len(),
                    });
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn lambdas(&self) -> impl Iterator<Item = (&Interval, &State)> {
        self.transitions.iter().filter_map(|t| match t {
            Transition::Lambda { value, target } => Some((value, target)),
            _ => None,
        })
    }

    pub fn grounds(&self) -> impl Iterator<Item = (&Head, &[State], &State)> {
        self.transitions.iter().filter_map(|t| match t {
            Transition::Ground { head, args, target } => Some((head, args.as_slice(), target)),
            _ => None,
        })
    }

    pub fn epsilons(&self) -> impl Iterator<Item = (&State, &State)> {
        self.transitions.iter().filter_map(|t| match t {
            Transition::Epsilon { from, to } => Some((from, to)),
            _ => None,
        })
    }

    pub fn has_epsilons(&self) -> bool {
        self.epsilons().next().is_some()
    }

    /// For every state, the states reachable from it through epsilon
    /// transitions, itself included.
    pub fn epsilon_closure(&self) -> BTreeMap<State, BTreeSet<State>> {
        let mut succ: BTreeMap<&State, Vec<&State>> = BTreeMap::new();
        for (from, to) in self.epsilons() {
            succ.entry(from).or_default().push(to);
        }
        self.states
            .iter()
            .map(|q| {
                let mut seen = BTreeSet::from([q.clone()]);
                let mut stack = vec![q];
                while let Some(p) = stack.pop() {
                    for r in succ.get(p).into_iter().flatten() {
                        if seen.insert((*r).clone()) {
                            stack.push(r);
                        }
                    }
                }
                (q.clone(), seen)
            })
            .collect()
    }

    /// A reusable evaluator for runs on this automaton.
    pub fn runner(&self) -> Runner<'_> {
        Runner::new(self)
    }

    /// Every state `t` reduces to.
    pub fn reaches(&self, t: &Term) -> Result<BTreeSet<State>, AutomatonError> {
        self.runner().reaches(t)
    }

    /// Membership of a term whose lattice leaves are atoms.
    pub fn member(&self, t: &Term) -> Result<bool, AutomatonError> {
        check_atom_leaves(t)?;
        let reached = self.reaches(t)?;
        Ok(reached.iter().any(|q| self.finals.contains(q)))
    }

    /// Epsilon-free automaton with the same language: every transition into
    /// a state is copied into each state that state reaches by epsilons.
    pub fn eliminate_epsilons(&self) -> Lta {
        if !self.has_epsilons() {
            return self.clone();
        }
        let closure = self.epsilon_closure();
        let mut out = Lta::new(self.alphabet.clone());
        out.states = self.states.clone();
        out.finals = self.finals.clone();
        for t in &self.transitions {
            if matches!(t, Transition::Epsilon { .. }) {
                continue;
            }
            for q in &closure[t.target()] {
                out.transitions.insert(t.with_target(q.clone()));
            }
        }
        out
    }

    /// Replaces every occurrence of `gone` by `keep`. Epsilon self-loops
    /// created by the merge are dropped.
    pub fn merge_states(&mut self, keep: &State, gone: &State) {
        if keep == gone || !self.states.contains(gone) {
            return;
        }
        let rename = |q: &State| if q == gone { keep.clone() } else { q.clone() };
        self.transitions = std::mem::take(&mut self.transitions)
            .into_iter()
            .map(|t| t.map_states(rename))
            .filter(|t| !matches!(t, Transition::Epsilon { from, to } if from == to))
            .collect();
        self.states.remove(gone);
        self.states.insert(keep.clone());
        if self.finals.remove(gone) {
            self.finals.insert(keep.clone());
        }
    }

    /// A state name not used yet, derived from `base` by appending `'`.
    pub fn fresh_name(&self, base: &str) -> State {
        let mut name = base.to_string();
        while self.states.contains(&State::new(name.as_str())) {
            name.push('\'');
        }
        State::new(name)
    }

    /// Renames states through `f`, which must be injective on this automaton.
    pub fn rename(&self, f: impl Fn(&State) -> State) -> Lta {
        Lta {
            alphabet: self.alphabet.clone(),
            states: self.states.iter().map(&f).collect(),
            finals: self.finals.iter().map(&f).collect(),
            transitions: self.transitions.iter().map(|t| t.map_states(&f)).collect(),
        }
    }
}

fn check_atom_leaves(t: &Term) -> Result<(), AutomatonError> {
    match t {
        Term::Val(v) if !v.is_atom() => Err(AutomatonError::NonAtomLeaf(v.to_string())),
        Term::State(q) => Err(AutomatonError::NonAtomLeaf(q.to_string())),
        Term::Var(x) => Err(AutomatonError::NotGround(x.clone())),
        _ => t.children().iter().try_for_each(check_atom_leaves),
    }
}

/// Evaluates runs against a fixed automaton, caching its epsilon closure.
pub struct Runner<'a> {
    lta: &'a Lta,
    closure: BTreeMap<State, BTreeSet<State>>,
    grounds: BTreeMap<&'a Head, Vec<(&'a [State], &'a State)>>,
}

impl<'a> Runner<'a> {
    fn new(lta: &'a Lta) -> Self {
        let mut grounds: BTreeMap<&Head, Vec<_>> = BTreeMap::new();
        for (h, args, target) in lta.grounds() {
            grounds.entry(h).or_default().push((args, target));
        }
        Runner { lta, closure: lta.epsilon_closure(), grounds }
    }

    pub fn automaton(&self) -> &'a Lta {
        self.lta
    }

    pub fn closure_of(&self, q: &State) -> BTreeSet<State> {
        self.closure.get(q).cloned().unwrap_or_else(|| BTreeSet::from([q.clone()]))
    }

    fn close(&self, seeds: impl IntoIterator<Item = &'a State>) -> BTreeSet<State> {
        let mut out = BTreeSet::new();
        for q in seeds {
            match self.closure.get(q) {
                Some(c) => out.extend(c.iter().cloned()),
                None => {
                    out.insert(q.clone());
                }
            }
        }
        out
    }

    /// Lambda values of transitions whose target reaches `q` through epsilons.
    pub fn values_into(&self, q: &State) -> BTreeSet<Interval> {
        self.lta
            .lambdas()
            .filter(|(_, t)| self.closure.get(*t).map_or(*t == q, |c| c.contains(q)))
            .map(|(v, _)| v.clone())
            .collect()
    }

    /// States reached by a lattice value: targets of lambdas covering it.
    pub fn reaches_value(&self, v: &Interval) -> BTreeSet<State> {
        if v.is_bottom() {
            return BTreeSet::new();
        }
        self.close(self.lta.lambdas().filter(|(l, _)| v.leq(l)).map(|(_, q)| q))
    }

    /// States reached through ground transitions with head `head` from
    /// argument state sets `args`.
    pub fn reaches_head(&self, head: &Head, args: &[BTreeSet<State>]) -> BTreeSet<State> {
        let Some(candidates) = self.grounds.get(head) else {
            return BTreeSet::new();
        };
        self.close(
            candidates
                .iter()
                .filter(|(qs, _)| qs.len() == args.len() && qs.iter().zip(args).all(|(q, s)| s.contains(q)))
                .map(|(_, q)| *q),
        )
    }

    pub fn reaches(&self, t: &Term) -> Result<BTreeSet<State>, AutomatonError> {
        match t {
            Term::Var(x) => Err(AutomatonError::NotGround(x.clone())),
            Term::State(q) => Ok(self.closure_of(q)),
            Term::Val(v) => Ok(self.reaches_value(v)),
            Term::Int(k) => Ok(self.reaches_value(&Interval::alpha(k))),
            Term::App { head, args } => {
                let expected =
                    self.lta.alphabet.passive_arity(head).ok_or_else(|| AutomatonError::UnknownSymbol(head.clone()))?;
                if expected != args.len() {
                    return Err(AutomatonError::ArityMismatch { symbol: head.clone(), expected, found: args.len() });
                }
                let sets = args.iter().map(|a| self.reaches(a)).collect::<Result<Vec<_>, _>>()?;
                Ok(self.reaches_head(&Head::Passive(head.clone()), &sets))
            }
            Term::Op { op, args } => {
                if args.len() != op.arity() {
                    return Err(AutomatonError::ArityMismatch {
                        symbol: op.name().to_string(),
                        expected: op.arity(),
                        found: args.len(),
                    });
                }
                let sets = args.iter().map(|a| self.reaches(a)).collect::<Result<Vec<_>, _>>()?;
                let mut out = self.reaches_head(&Head::Builtin(*op), &sets);
                if let Some(v) = t.abstract_value() {
                    out.extend(self.reaches_value(&v));
                }
                Ok(out)
            }
        }
    }
}

impl fmt::Display for Lta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let finals: Vec<&str> = self.finals.iter().map(State::name).collect();
        writeln!(f, "final {}", finals.join(" "))?;
        for t in &self.transitions {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }

    pub(crate) fn running() -> Lta {
        Lta::build(
            Alphabet::new([("f", 1)]),
            [Transition::lambda(iv("[0,4]"), "q1"), Transition::ground("f", &["q1"], "q2")],
            [State::from("q2")],
        )
        .unwrap()
    }

    fn f(t: Term) -> Term {
        Term::app("f", vec![t])
    }

    #[test]
    fn runs_accept_values_below_a_lambda() {
        let a = running();
        assert!(a.reaches(&f(Term::val(iv("[1,4]")))).unwrap().contains(&State::from("q2")));
        assert!(a.reaches(&f(Term::val(iv("[0,2]")))).unwrap().contains(&State::from("q2")));
        assert!(a.reaches(&f(Term::val(iv("[3,9]")))).unwrap().is_empty());
        assert!(a.reaches(&f(Term::val(Interval::BOTTOM))).unwrap().is_empty());
    }

    #[test]
    fn membership_needs_atom_leaves() {
        let a = running();
        assert!(a.member(&f(Term::val(iv("[3,3]")))).unwrap());
        assert!(!a.member(&f(Term::val(iv("[5,5]")))).unwrap());
        assert!(a.member(&f(Term::int(4))).unwrap());
        assert!(matches!(a.member(&f(Term::val(iv("[1,2]")))), Err(AutomatonError::NonAtomLeaf(_))));
        let empty = Lta::new(Alphabet::new([("f", 1)]));
        assert!(!empty.member(&f(Term::int(1))).unwrap());
    }

    #[test]
    fn interpreted_subterms_are_evaluated() {
        let a = running();
        let t = f(Term::op(BuiltinOp::Add, Term::val(iv("[1,1]")), Term::val(iv("[2,3]"))));
        assert!(a.reaches(&t).unwrap().contains(&State::from("q2")));
        let t = f(Term::op(BuiltinOp::Add, Term::val(iv("[1,1]")), Term::val(iv("[2,4]"))));
        assert!(a.reaches(&t).unwrap().is_empty());
    }

    #[test]
    fn epsilons_propagate_runs() {
        let mut a = running();
        a.add_transition(Transition::epsilon("q2", "q3")).unwrap();
        a.set_finals(BTreeSet::from([State::from("q3")]));
        assert!(a.member(&f(Term::int(2))).unwrap());
        let b = a.eliminate_epsilons();
        assert!(!b.has_epsilons());
        assert!(b.member(&f(Term::int(2))).unwrap());
        assert!(!b.member(&f(Term::int(7))).unwrap());
    }

    #[test]
    fn invalid_transitions_are_rejected() {
        let mut a = running();
        assert!(matches!(
            a.add_transition(Transition::lambda(Interval::BOTTOM, "q1")),
            Err(AutomatonError::BottomLambda(_))
        ));
        assert!(matches!(
            a.add_transition(Transition::ground("f", &["q1", "q1"], "q2")),
            Err(AutomatonError::ArityMismatch { .. })
        ));
        assert!(matches!(a.add_transition(Transition::ground("g", &[], "q2")), Err(AutomatonError::UnknownSymbol(_))));
        assert!(matches!(a.reaches(&Term::constant("g")), Err(AutomatonError::UnknownSymbol(_))));
    }
}
