//! Tree automata completion for conditional rewriting systems.
//!
//! Each step evaluates the automaton, adds the critical pairs of every rule,
//! merges states identified by the approximation equations and evaluates
//! again. The loop stops when a step leaves the automaton unchanged.

mod equations;
mod eval;
mod matching;
mod normalize;

pub use equations::apply_equations;
pub use eval::{eval_automaton, eval_with, fold_value_states, propag, propag_candidates, Evaluation, Widening};
pub use matching::{instantiate, join, omega, Matcher, RuleSubst, StateSubst};
pub use normalize::{normalize, value_exact_state, value_exact_states, FreshStates};

use crate::automaton::{AutomatonError, Lta, State, Transition};
use crate::rewriting::{EquationSet, Trs};
use crate::solver::{SolverError, StrictMode};
use crate::term::Term;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionError {
    #[error("max_steps must be at least 1")]
    NoSteps,
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionConfig {
    pub max_steps: usize,
    /// Per-state threshold on evaluation additions before widening, and the
    /// step from which states merged by equations are widened eagerly.
    pub widen_after: usize,
    pub equations: EquationSet,
    pub strict: StrictMode,
    /// Stops without convergence once a step leaves more states than this.
    pub max_states: Option<usize>,
}

impl Default for CompletionConfig {
    fn default() -> Self {
        CompletionConfig {
            max_steps: 50,
            widen_after: 3,
            equations: EquationSet::default(),
            strict: StrictMode::Relaxed,
            max_states: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Phase {
    Eval,
    OneStep,
    Equations,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Eval => "eval",
            Phase::OneStep => "one_step",
            Phase::Equations => "equations",
        })
    }
}

/// One line of the completion trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub step: usize,
    pub phase: Phase,
    pub added: usize,
    pub merged: Vec<(State, State)>,
    pub widened: Vec<State>,
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let merged: Vec<String> = self.merged.iter().map(|(k, g)| format!("{g}->{k}")).collect();
        let widened: Vec<&str> = self.widened.iter().map(State::name).collect();
        write!(
            f,
            "step={} phase={} added={} merged=[{}] widened=[{}]",
            self.step,
            self.phase,
            self.added,
            merged.join(" "),
            widened.join(" ")
        )
    }
}

/// Mutable state threaded through the completion loop.
#[derive(Debug, Clone)]
pub struct CompletionState {
    pub current: Lta,
    pub step: usize,
    pub fresh: FreshStates,
    pub widening: Widening,
    pub trace: Vec<TraceRecord>,
}

impl CompletionState {
    pub fn new(a: &Lta, widen_after: usize) -> Self {
        CompletionState {
            current: a.clone(),
            step: 0,
            fresh: FreshStates::after(a),
            widening: Widening::new(widen_after),
            trace: Vec::new(),
        }
    }

    fn record(&mut self, phase: Phase, added: usize, merged: Vec<(State, State)>, widened: Vec<State>) {
        self.trace.push(TraceRecord { step: self.step, phase, added, merged, widened });
    }

    /// Evaluates the current automaton, then folds value-exact states.
    pub fn evaluate(&mut self) {
        let ev = eval_with(&self.current, &mut self.widening);
        self.current = ev.automaton;
        let merged = fold_value_states(&mut self.current, &mut self.widening);
        self.record(Phase::Eval, ev.added, merged, ev.widened.into_iter().collect());
    }

    /// Adds every critical pair of `trs` on the current automaton. Critical
    /// pairs are computed on the automaton as it was before the step; one
    /// fresh state per target state collects all of them.
    pub fn one_step(&mut self, trs: &Trs, mode: StrictMode) -> Result<usize, CompletionError> {
        let input = self.current.clone();
        let runner = input.runner();
        let matcher = Matcher::new(&runner);
        let mut pairs: Vec<(State, Term)> = Vec::new();
        for rule in &trs.rules {
            for q in input.states() {
                for binding in omega(&matcher, rule, q, mode)? {
                    pairs.push((q.clone(), instantiate(&rule.rhs, &binding)));
                }
            }
        }
        let mut collectors: BTreeMap<State, State> = BTreeMap::new();
        let mut added = 0;
        for (q, instance) in pairs {
            let collector = match collectors.get(&q) {
                Some(p) => p.clone(),
                None => {
                    let p = self.fresh.next(&self.current);
                    self.current.add_state(p.clone());
                    collectors.insert(q.clone(), p.clone());
                    if self.current.add_transition(Transition::Epsilon { from: p.clone(), to: q.clone() })? {
                        added += 1;
                    }
                    p
                }
            };
            added += normalize(&mut self.current, &instance, &collector, &mut self.fresh)?.len();
        }
        self.record(Phase::OneStep, added, Vec::new(), Vec::new());
        Ok(added)
    }

    /// Applies the equations to a fixpoint. From step `widen_after` on, the
    /// surviving states of these merges widen on their next evaluation.
    pub fn equations(
        &mut self,
        equations: &EquationSet,
        mode: StrictMode,
    ) -> Result<Vec<(State, State)>, CompletionError> {
        let merges = apply_equations(&mut self.current, equations, mode)?;
        for (keep, gone) in &merges {
            self.widening.merge(keep, gone);
        }
        let eager: BTreeSet<State> = if self.step >= self.widening.threshold() {
            merges.iter().map(|(k, _)| k.clone()).filter(|k| self.current.states().contains(k)).collect()
        } else {
            BTreeSet::new()
        };
        self.widening.set_eager(eager);
        self.record(Phase::Equations, 0, merges.clone(), Vec::new());
        Ok(merges)
    }
}

/// Outcome of [`complete`].
#[derive(Debug, Clone)]
pub struct Completion {
    pub automaton: Lta,
    pub converged: bool,
    /// Number of steps that changed the automaton.
    pub steps: usize,
    pub trace: Vec<TraceRecord>,
}

impl Completion {
    pub fn trace_text(&self) -> String {
        self.trace.iter().map(|r| format!("{r}\n")).collect()
    }
}

/// Runs completion until a step changes nothing, `cfg.max_steps` steps
/// have run or the state budget is exceeded. The result over-approximates
/// the terms reachable from `a` whenever it converged.
pub fn complete(a: &Lta, trs: &Trs, cfg: &CompletionConfig) -> Result<Completion, CompletionError> {
    if cfg.max_steps == 0 {
        return Err(CompletionError::NoSteps);
    }
    let mut alphabet = a.alphabet().clone();
    for rule in &trs.rules {
        for op in builtins_of(&rule.rhs) {
            alphabet.add_builtin(op);
        }
    }
    let mut start = a.clone();
    start.set_alphabet(alphabet);
    let mut st = CompletionState::new(&start, cfg.widen_after);
    st.evaluate();
    let mut steps = 0;
    let mut converged = false;
    for step in 1..=cfg.max_steps {
        st.step = step;
        let before = st.current.clone();
        st.one_step(trs, cfg.strict)?;
        st.equations(&cfg.equations, cfg.strict)?;
        st.evaluate();
        st.widening.set_eager([]);
        if st.current == before {
            converged = true;
            break;
        }
        steps = step;
        if cfg.max_states.is_some_and(|m| st.current.states().len() > m) {
            break;
        }
    }
    Ok(Completion { automaton: st.current, converged, steps, trace: st.trace })
}

fn builtins_of(t: &Term) -> Vec<crate::term::BuiltinOp> {
    let mut out = Vec::new();
    if let Term::Op { op, .. } = t {
        out.push(*op);
    }
    for c in t.children() {
        out.extend(builtins_of(c));
    }
    out
}

/// Verdict of a reachability check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// No reachable term is bad.
    Safe,
    /// Completion did not converge, or its result meets the bad terms. The
    /// witness, when present, may be spurious.
    Unknown { converged: bool, witness: Option<Term> },
}

/// Completes `a0` and intersects the result with `bad`.
pub fn check_reachability(a0: &Lta, bad: &Lta, trs: &Trs, cfg: &CompletionConfig) -> Result<Verdict, CompletionError> {
    let done = complete(a0, trs, cfg)?;
    let meet = done.automaton.intersection(bad);
    if done.converged && meet.is_empty() {
        return Ok(Verdict::Safe);
    }
    Ok(Verdict::Unknown { converged: done.converged, witness: meet.witness() })
}
