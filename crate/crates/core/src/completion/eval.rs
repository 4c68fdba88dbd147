//! Evaluation of builtin transitions into lattice values, with widening.

use super::normalize::value_exact_states;
use crate::automaton::{Head, Lta, State, Transition};
use crate::lattice::{Interval, Lattice};
use std::collections::{BTreeMap, BTreeSet};

/// Widening bookkeeping for one state space, kept across evaluations.
///
/// Every lambda added at a state by evaluation bumps its counter. Once the
/// counter exceeds the threshold, or immediately for states marked eager,
/// each further addition replaces all lambdas of the state by a single
/// widened value.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Widening {
    threshold: usize,
    counts: BTreeMap<State, usize>,
    eager: BTreeSet<State>,
}

impl Widening {
    pub fn new(threshold: usize) -> Self {
        Widening { threshold, ..Widening::default() }
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn count(&self, q: &State) -> usize {
        self.counts.get(q).copied().unwrap_or(0)
    }

    pub fn set_eager(&mut self, states: impl IntoIterator<Item = State>) {
        self.eager = states.into_iter().collect();
    }

    /// Carries the counter of `gone` over to `keep`.
    pub fn merge(&mut self, keep: &State, gone: &State) {
        if let Some(n) = self.counts.remove(gone) {
            *self.counts.entry(keep.clone()).or_default() += n;
        }
        if self.eager.remove(gone) {
            self.eager.insert(keep.clone());
        }
    }
}

/// Result of evaluating an automaton to its fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub automaton: Lta,
    /// Number of propagation passes that added something.
    pub passes: usize,
    pub added: usize,
    pub widened: BTreeSet<State>,
}

/// Lambda values one propagation pass would add: for every builtin ground
/// transition, the operator applied to every tuple of lambda values of its
/// argument states, unless a lambda at the target already covers it.
pub fn propag_candidates(a: &Lta) -> BTreeSet<(State, Interval)> {
    let runner = a.runner();
    let mut direct: BTreeMap<&State, Vec<&Interval>> = BTreeMap::new();
    for (v, q) in a.lambdas() {
        direct.entry(q).or_default().push(v);
    }
    let mut out = BTreeSet::new();
    for (head, args, target) in a.grounds() {
        let Head::Builtin(op) = head else { continue };
        let choices: Vec<Vec<Interval>> = args.iter().map(|q| runner.values_into(q).into_iter().collect()).collect();
        if choices.iter().any(Vec::is_empty) {
            continue;
        }
        for tuple in crate::automaton::tuples_of_choices(&choices) {
            let [x, y] = tuple.as_slice() else { continue };
            let r = op.apply_abstract(x, y);
            if r.is_bottom() {
                continue;
            }
            let covered = direct.get(target).is_some_and(|vs| vs.iter().any(|v| r.leq(v)));
            if !covered {
                out.insert((target.clone(), r));
            }
        }
    }
    out
}

/// One propagation pass without widening.
pub fn propag(a: &Lta) -> Lta {
    let mut out = a.clone();
    for (q, v) in propag_candidates(a) {
        out.add_transition(Transition::Lambda { value: v, target: q }).expect("lambda values are never bottom");
    }
    out
}

/// Evaluation fixpoint with fresh widening counters.
pub fn eval_automaton(a: &Lta, widen_after: usize) -> Lta {
    eval_with(a, &mut Widening::new(widen_after)).automaton
}

/// Iterates propagation until nothing new is added, widening states whose
/// counters run past the threshold.
pub fn eval_with(a: &Lta, widening: &mut Widening) -> Evaluation {
    let mut cur = a.clone();
    let mut passes = 0;
    let mut added = 0;
    let mut widened = BTreeSet::new();
    loop {
        let candidates = propag_candidates(&cur);
        let mut changed = false;
        for (q, v) in candidates {
            let lambdas: Vec<Interval> = cur.lambdas().filter(|(_, p)| **p == q).map(|(w, _)| w.clone()).collect();
            if lambdas.iter().any(|w| v.leq(w)) {
                continue;
            }
            changed = true;
            added += 1;
            let count = widening.counts.entry(q.clone()).or_default();
            *count += 1;
            if *count > widening.threshold || widening.eager.contains(&q) {
                let old = lambdas.iter().fold(Interval::bottom(), |acc, w| acc.lub(w));
                let value = old.widen(&old.lub(&v));
                for w in lambdas {
                    cur.remove_transition(&Transition::Lambda { value: w, target: q.clone() });
                }
                cur.add_transition(Transition::Lambda { value, target: q.clone() })
                    .expect("widened value is not bottom");
                widened.insert(q);
            } else {
                cur.add_transition(Transition::Lambda { value: v, target: q }).expect("lambda values are never bottom");
            }
        }
        if !changed {
            break;
        }
        passes += 1;
    }
    Evaluation { automaton: cur, passes, added, widened }
}

/// Merges value-exact states carrying the same value into the lowest of
/// them. Returns the merges performed as `(kept, removed)` pairs.
pub fn fold_value_states(a: &mut Lta, widening: &mut Widening) -> Vec<(State, State)> {
    let mut groups: BTreeMap<Interval, Vec<State>> = BTreeMap::new();
    for (q, v) in value_exact_states(a) {
        groups.entry(v).or_default().push(q);
    }
    let mut merged = Vec::new();
    for (_, mut states) in groups {
        states.sort();
        let keep = states[0].clone();
        for gone in &states[1..] {
            a.merge_states(&keep, gone);
            widening.merge(&keep, gone);
            merged.push((keep.clone(), gone.clone()));
        }
    }
    merged
}
