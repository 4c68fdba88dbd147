//! Randomised property suites checked against the oracle. Each suite runs
//! a fixed number of seeded cases and reports every violation it finds.

use super::random::{self, AutomatonShape, TrsShape};
use super::{enumerate_generate_and_test, enumerate_language, naive_member, one_step_successors, EnumBounds};
use crate::automaton::Lta;
use crate::completion::{eval_with, CompletionConfig, CompletionState, Widening};
use crate::lattice::Interval;
use crate::solver::{ConstraintSystem, StrictMode};
use crate::term::Term;
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub cases: usize,
    /// Individual checks performed.
    pub checks: usize,
    /// Cases that could not be checked, e.g. because completion did not
    /// converge or an enumeration was truncated.
    pub skipped: usize,
    /// Cases checked at a smaller enumeration depth than requested because
    /// the full depth was truncated.
    pub reduced: usize,
    pub violations: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn violation(&mut self, seed: u64, what: impl fmt::Display) {
        self.violations.push(format!("seed {seed}: {what}"));
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cases={} checks={} skipped={} reduced={} violations={}",
            self.cases,
            self.checks,
            self.skipped,
            self.reduced,
            self.violations.len()
        )
    }
}

/// Every integer solution of a random linear system lies in the solved box.
pub fn solver_soundness(cases: usize, range: i64) -> SuiteReport {
    let mut report = SuiteReport { cases, ..Default::default() };
    for seed in 0..cases as u64 {
        let sys = random::linear_system(&mut random::rng(seed), range);
        for mode in [StrictMode::Relaxed, StrictMode::StrictInt] {
            let solved =
                ConstraintSystem::from_predicates(&sys.predicates(), mode).expect("linear").solve_box(&sys.input_box());
            for point in sys.solutions() {
                report.checks += 1;
                let inside = solved.as_ref().is_some_and(|b| {
                    sys.vars.iter().zip(&point).all(|(x, v)| b.get(x).is_some_and(|i| i.contains(&BigInt::from(*v))))
                });
                if !inside {
                    report.violation(seed, format!("{mode:?}: solution {point:?} outside {solved:?} for {sys:?}"));
                    break;
                }
            }
        }
    }
    report
}

pub fn completion_instance(seed: u64) -> (Lta, crate::rewriting::Trs, CompletionConfig) {
    let mut rng = random::rng(seed);
    let shape = AutomatonShape { builtin: 0.1, ..AutomatonShape::small() };
    let a = random::automaton(&mut rng, &shape);
    let trs = random::trs(&mut rng, &shape.alphabet, &TrsShape::default());
    let equations = random::equations(&mut rng, &shape.alphabet, 2);
    let strict = if rng.gen_bool(0.5) { StrictMode::StrictInt } else { StrictMode::Relaxed };
    (a, trs, CompletionConfig { max_steps: 12, widen_after: 3, equations, strict, max_states: Some(150) })
}

/// Bounds used to sample languages in the completion suites.
pub fn completion_bounds() -> EnumBounds {
    EnumBounds::new(3, -8, 8).with_max_terms(20_000)
}

/// For converged completions, every one-step successor of a sampled term
/// of the input language is accepted by the result.
pub fn completion_soundness(cases: usize) -> SuiteReport {
    completion_soundness_seeds(0..cases as u64)
}

pub fn completion_soundness_seeds(seeds: impl IntoIterator<Item = u64> + Clone) -> SuiteReport {
    let mut report = SuiteReport { cases: seeds.clone().into_iter().count(), ..Default::default() };
    let bounds = completion_bounds();
    for seed in seeds {
        let (a, trs, cfg) = completion_instance(seed);
        let done = match crate::completion::complete(&a, &trs, &cfg) {
            Ok(done) if done.converged => done,
            Ok(_) => {
                report.skipped += 1;
                continue;
            }
            Err(e) => {
                report.violation(seed, format!("completion failed: {e}"));
                continue;
            }
        };
        let sample = enumerate_language(&a, &bounds);
        for s in &sample.terms {
            if !done.automaton.member(s).unwrap_or(false) {
                report.violation(seed, format!("input term {s} lost"));
            }
            for t in one_step_successors(&trs, s) {
                report.checks += 1;
                if !done.automaton.member(&t).unwrap_or(false) || !naive_member(&done.automaton, &t) {
                    report.violation(seed, format!("{s} -> {t} not accepted"));
                }
            }
        }
    }
    report
}

fn check_growth(report: &mut SuiteReport, seed: u64, phase: &str, before: &Lta, after: &Lta, bounds: &EnumBounds) {
    let Some((depth, langs)) = untruncated(&[before], bounds) else {
        report.skipped += 1;
        return;
    };
    if depth < bounds.max_depth {
        report.reduced += 1;
    }
    report.checks += 1;
    if let Some(t) = langs[0].iter().find(|t| !naive_member(after, t)) {
        report.violation(seed, format!("{phase} dropped {t}"));
    }
}

/// Sampled languages never shrink across a completion phase.
pub fn phase_soundness(cases: usize) -> SuiteReport {
    let mut report = SuiteReport { cases, ..Default::default() };
    let bounds = completion_bounds();
    for seed in 0..cases as u64 {
        let (a, trs, cfg) = completion_instance(seed);
        let mut st = CompletionState::new(&a, cfg.widen_after);
        let run = (|| -> Result<(), crate::completion::CompletionError> {
            let before = st.current.clone();
            st.evaluate();
            check_growth(&mut report, seed, "eval", &before, &st.current, &bounds);
            for step in 1..=4 {
                st.step = step;
                let start = st.current.clone();
                st.one_step(&trs, cfg.strict)?;
                check_growth(&mut report, seed, "one_step", &start, &st.current, &bounds);
                let before = st.current.clone();
                st.equations(&cfg.equations, cfg.strict)?;
                check_growth(&mut report, seed, "equations", &before, &st.current, &bounds);
                let before = st.current.clone();
                st.evaluate();
                st.widening.set_eager([]);
                check_growth(&mut report, seed, "eval", &before, &st.current, &bounds);
                if st.current == start {
                    break;
                }
            }
            Ok(())
        })();
        if let Err(e) = run {
            report.violation(seed, format!("completion failed: {e}"));
        }
    }
    report
}

/// Union and intersection agree with set union and intersection of the
/// enumerated languages.
pub fn boolean_equivalence(cases: usize, bounds: &EnumBounds) -> SuiteReport {
    let shape = AutomatonShape { max_width: 1, unbounded: 0.05, max_lambdas: 1, ..AutomatonShape::small() };
    boolean_equivalence_with(cases, bounds, &shape)
}

/// Languages of the operands and results at the largest depth up to
/// `bounds.max_depth` where no enumeration is truncated.
fn untruncated(automata: &[&Lta], bounds: &EnumBounds) -> Option<(usize, Vec<BTreeSet<Term>>)> {
    (1..=bounds.max_depth).rev().find_map(|depth| {
        let b = EnumBounds { max_depth: depth, ..*bounds };
        let langs: Vec<_> = automata.iter().map(|a| enumerate_language(a, &b)).collect();
        (!langs.iter().any(|l| l.truncated)).then(|| (depth, langs.into_iter().map(|l| l.terms).collect()))
    })
}

pub fn boolean_equivalence_with(cases: usize, bounds: &EnumBounds, shape: &AutomatonShape) -> SuiteReport {
    let mut report = SuiteReport { cases, ..Default::default() };
    for seed in 0..cases as u64 {
        let mut rng = random::rng(seed);
        let a = random::automaton(&mut rng, shape);
        let b = random::automaton(&mut rng, shape);
        let (u, i) = (a.union(&b), a.intersection(&b));
        let Some((depth, langs)) = untruncated(&[&a, &b, &u, &i], bounds) else {
            report.skipped += 1;
            continue;
        };
        if depth < bounds.max_depth {
            report.reduced += 1;
        }
        let [la, lb, lu, li] = <[BTreeSet<Term>; 4]>::try_from(langs).expect("four languages");
        report.checks += 2;
        let union: BTreeSet<Term> = la.union(&lb).cloned().collect();
        let inter: BTreeSet<Term> = la.intersection(&lb).cloned().collect();
        if lu != union {
            report.violation(seed, format!("union differs: {:?}", lu.symmetric_difference(&union).next()));
        }
        if li != inter {
            report.violation(seed, format!("intersection differs: {:?}", li.symmetric_difference(&inter).next()));
        }
    }
    report
}

/// Reduction preserves the sampled language. An empty automaton has no
/// sampled term and a non-empty one yields a witness the oracle accepts.
pub fn reduce_and_emptiness(cases: usize, bounds: &EnumBounds) -> SuiteReport {
    let mut report = SuiteReport { cases, ..Default::default() };
    let shape = AutomatonShape::small();
    for seed in 0..cases as u64 {
        let a = random::automaton(&mut random::rng(seed), &shape);
        let la = enumerate_language(&a, bounds);
        let lr = enumerate_language(&a.reduce(), bounds);
        if la.truncated || lr.truncated {
            report.skipped += 1;
            continue;
        }
        report.checks += 2;
        if la.terms != lr.terms {
            report.violation(seed, "reduce changed the language");
        }
        if a.is_empty() && !la.terms.is_empty() {
            report.violation(seed, "is_empty but the oracle finds terms");
        }
        if !a.is_empty() {
            match a.witness() {
                Some(w) if naive_member(&a, &w) => {}
                w => report.violation(seed, format!("not empty but the witness {w:?} is rejected")),
            }
        }
    }
    report
}

fn random_candidate(rng: &mut impl Rng, symbols: &[(String, usize)], depth: usize, lo: i64, hi: i64) -> Term {
    let leaves: Vec<&(String, usize)> = symbols.iter().filter(|(_, k)| *k == 0).collect();
    let inner: Vec<&(String, usize)> = symbols.iter().filter(|(_, k)| *k > 0).collect();
    if depth <= 1 || inner.is_empty() || rng.gen_bool(0.3) {
        return match leaves.choose(rng) {
            Some((c, _)) if rng.gen_bool(0.2) => Term::constant(c.clone()),
            _ => Term::Val(Interval::atom(rng.gen_range(lo..=hi))),
        };
    }
    let (f, k) = inner.choose(rng).expect("inner symbols");
    Term::app(f.clone(), (0..*k).map(|_| random_candidate(rng, symbols, depth - 1, lo, hi)).collect())
}

/// Enumerated terms pass engine membership, random terms outside the
/// enumeration fail it, and the generate-and-test enumerator agrees.
pub fn membership_agreement(cases: usize, bounds: &EnumBounds) -> SuiteReport {
    let mut report = SuiteReport { cases, ..Default::default() };
    let shape = AutomatonShape::small();
    let symbols: Vec<(String, usize)> = shape.alphabet.passive().map(|(f, k)| (f.to_string(), k)).collect();
    for seed in 0..cases as u64 {
        let mut rng = random::rng(seed);
        let a = random::automaton(&mut rng, &shape);
        let la = enumerate_language(&a, bounds);
        if la.truncated {
            report.skipped += 1;
            continue;
        }
        for t in &la.terms {
            report.checks += 1;
            if !a.member(t).unwrap_or(false) || !naive_member(&a, t) {
                report.violation(seed, format!("{t} enumerated but rejected"));
            }
        }
        for _ in 0..50 {
            let t = random_candidate(&mut rng, &symbols, bounds.max_depth, bounds.atom_lo, bounds.atom_hi);
            if la.terms.contains(&t) {
                continue;
            }
            report.checks += 1;
            if a.member(&t).unwrap_or(true) || naive_member(&a, &t) {
                report.violation(seed, format!("{t} accepted but not enumerated"));
            }
        }
        let other = enumerate_generate_and_test(&a, bounds);
        if !other.truncated {
            report.checks += 1;
            if other.terms != la.terms {
                report.violation(seed, "enumerators disagree");
            }
        }
    }
    report
}

/// Evaluation of automata with operator loops terminates within
/// `factor × widen_after` propagation passes.
pub fn widening_termination(cases: usize, widen_after: usize, factor: usize) -> SuiteReport {
    let mut report = SuiteReport { cases, ..Default::default() };
    for seed in 0..cases as u64 {
        let a = random::looping_automaton(&mut random::rng(seed));
        let ev = eval_with(&a, &mut Widening::new(widen_after));
        report.checks += 1;
        if ev.passes > factor * widen_after {
            report.violation(seed, format!("{} passes", ev.passes));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let b = EnumBounds::new(3, -4, 4).with_max_terms(5_000);
        for r in [
            solver_soundness(30, 10),
            completion_soundness(20),
            phase_soundness(10),
            boolean_equivalence(20, &b),
            reduce_and_emptiness(20, &b),
            membership_agreement(20, &b),
            widening_termination(20, 3, 10),
        ] {
            assert!(r.passed(), "{r}: {:?}", r.violations);
        }
    }
}
