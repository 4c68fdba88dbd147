//! Matching of linear patterns against automaton states, and the restricted
//! substitutions under which a conditional rule applies.

use crate::automaton::{Head, Runner, State, Transition};
use crate::lattice::AtomicLattice;
use crate::lattice::Interval;
use crate::rewriting::RewriteRule;
use crate::solver::{solve_with, Binding, ConstraintSystem, SolverError, StrictMode};
use crate::term::Term;
use std::collections::{BTreeMap, BTreeSet};

/// Variables bound to states.
pub type StateSubst = BTreeMap<String, State>;

/// Variables bound to states or, for constrained ones, to solved values.
pub type RuleSubst = BTreeMap<String, Binding>;

/// Pattern matcher over a fixed automaton.
///
/// A goal `s ⊴ q` is expanded through every transition into `q`, including
/// transitions into states that reach `q` by epsilons. Variables match any
/// state; the disjunction of conjunctions is kept flat as a list of
/// substitutions, and an empty list means no match.
pub struct Matcher<'r, 'a> {
    runner: &'r Runner<'a>,
    into: BTreeMap<State, Vec<&'a Transition>>,
}

impl<'r, 'a> Matcher<'r, 'a> {
    pub fn new(runner: &'r Runner<'a>) -> Self {
        let mut into: BTreeMap<State, Vec<&'a Transition>> = BTreeMap::new();
        for t in runner.automaton().transitions() {
            if let Transition::Ground { target, .. } = t {
                for q in runner.closure_of(target) {
                    into.entry(q).or_default().push(t);
                }
            }
        }
        Matcher { runner, into }
    }

    pub fn runner(&self) -> &'r Runner<'a> {
        self.runner
    }

    /// Every substitution σ with `pattern σ →* q`.
    pub fn matching(&self, pattern: &Term, q: &State) -> BTreeSet<StateSubst> {
        self.goal(pattern, q).into_iter().collect()
    }

    fn goal(&self, s: &Term, q: &State) -> Vec<StateSubst> {
        let holds = |ok: bool| if ok { vec![StateSubst::new()] } else { Vec::new() };
        match s {
            Term::Var(x) => vec![StateSubst::from([(x.clone(), q.clone())])],
            Term::State(p) => holds(self.runner.closure_of(p).contains(q)),
            Term::Val(v) => holds(self.runner.reaches_value(v).contains(q)),
            Term::Int(k) => holds(self.runner.reaches_value(&Interval::alpha(k)).contains(q)),
            Term::App { head, args } => self.unfold(&Head::Passive(head.clone()), args, q),
            Term::Op { op, args } => {
                let mut out = self.unfold(&Head::Builtin(*op), args, q);
                if let Some(v) = s.abstract_value() {
                    if self.runner.reaches_value(&v).contains(q) {
                        out.push(StateSubst::new());
                    }
                }
                out
            }
        }
    }

    fn unfold(&self, head: &Head, args: &[Term], q: &State) -> Vec<StateSubst> {
        let mut out = Vec::new();
        for t in self.into.get(q).into_iter().flatten() {
            let Transition::Ground { head: h, args: qs, .. } = t else { continue };
            if h != head || qs.len() != args.len() {
                continue;
            }
            let mut conj = vec![StateSubst::new()];
            for (s, qi) in args.iter().zip(qs) {
                let alts = self.goal(s, qi);
                conj = conj.iter().flat_map(|c| alts.iter().filter_map(move |a| join(c, a))).collect();
                if conj.is_empty() {
                    break;
                }
            }
            out.extend(conj);
        }
        out
    }
}

/// Union of two substitutions, if they agree on shared variables.
pub fn join(a: &StateSubst, b: &StateSubst) -> Option<StateSubst> {
    let mut out = a.clone();
    for (x, q) in b {
        match out.get(x) {
            Some(p) if p != q => return None,
            Some(_) => {}
            None => {
                out.insert(x.clone(), q.clone());
            }
        }
    }
    Some(out)
}

/// The right-hand side instance of a rule under a solved substitution, with
/// integer constants abstracted.
pub fn instantiate(rhs: &Term, binding: &RuleSubst) -> Term {
    let sigma = binding
        .iter()
        .map(|(x, b)| {
            let t = match b {
                Binding::State(q) => Term::State(q.clone()),
                Binding::Value(v) => Term::Val(v.clone()),
            };
            (x.clone(), t)
        })
        .collect();
    rhs.substitute(&sigma).abstracted()
}

/// Substitutions under which `rule` rewrites a term recognised at `q` into
/// something not yet recognised there: matches of the left-hand side,
/// restricted by the conditions, minus those whose instance already
/// reaches `q`.
pub fn omega(
    matcher: &Matcher<'_, '_>,
    rule: &RewriteRule,
    q: &State,
    mode: StrictMode,
) -> Result<Vec<RuleSubst>, SolverError> {
    let sigmas = matcher.matching(&rule.lhs, q);
    if sigmas.is_empty() {
        return Ok(Vec::new());
    }
    let system = ConstraintSystem::from_predicates(&rule.conditions, mode)?;
    let runner = matcher.runner();
    let mut out = BTreeSet::new();
    for sigma in &sigmas {
        for binding in solve_with(runner, sigma, &system) {
            let instance = instantiate(&rule.rhs, &binding);
            let covered = runner.reaches(&instance).map(|r| r.contains(q)).unwrap_or(false);
            if !covered {
                out.insert(binding);
            }
        }
    }
    Ok(out.into_iter().collect())
}
