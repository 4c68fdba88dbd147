//! Boolean and decision operations on automata.

use super::{AutomatonError, Head, Lta, State, Transition};
use crate::lattice::{AtomicLattice, Interval, Lattice, Partition};
use crate::partitioned::{self, Plta};
use crate::term::Term;
use std::collections::{BTreeMap, BTreeSet};

/// Outcome of a language inclusion check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inclusion {
    pub included: bool,
    /// The right-hand automaton had to be over-approximated to make it
    /// deterministic, so `included` speaks about that approximation.
    pub approximate: bool,
    /// A term of the left language outside the (possibly approximated)
    /// right language.
    pub counterexample: Option<Term>,
}

impl Lta {
    /// Disjoint union. States of `other` that clash with ours get `'` appended.
    pub fn union(&self, other: &Lta) -> Lta {
        let mut taken: BTreeSet<State> = self.states.clone();
        let mut renaming = BTreeMap::new();
        for q in &other.states {
            let mut name = q.name().to_string();
            while taken.contains(&State::new(name.as_str())) {
                name.push('\'');
            }
            let fresh = State::new(name);
            taken.insert(fresh.clone());
            renaming.insert(q.clone(), fresh);
        }
        let renamed = other.rename(|q| renaming[q].clone());
        let mut out = self.clone();
        out.alphabet = self.alphabet.merged(&other.alphabet);
        out.states.extend(renamed.states);
        out.finals.extend(renamed.finals);
        out.transitions.extend(renamed.transitions);
        out
    }

    /// Product automaton over the states reachable in both operands. The pair
    /// `(p, q)` is named `q{p&q}`.
    pub fn intersection(&self, other: &Lta) -> Lta {
        let a = self.eliminate_epsilons();
        let b = other.eliminate_epsilons();
        let pair = |p: &State, q: &State| State::new(format!("q{{{}&{}}}", p.name(), q.name()));
        let mut out = Lta::new(a.alphabet.merged(&b.alphabet));
        let mut marked: BTreeMap<(State, State), State> = BTreeMap::new();
        for (la, p) in a.lambdas() {
            for (lb, q) in b.lambdas() {
                let v = la.glb(lb);
                if !v.is_bottom() {
                    let pq = pair(p, q);
                    marked.insert((p.clone(), q.clone()), pq.clone());
                    out.transitions.insert(Transition::Lambda { value: v, target: pq });
                }
            }
        }
        let mut by_head: BTreeMap<&Head, Vec<(&[State], &State)>> = BTreeMap::new();
        for (h, args, t) in b.grounds() {
            by_head.entry(h).or_default().push((args, t));
        }
        loop {
            let mut changed = false;
            for (h, xs, p) in a.grounds() {
                for (ys, q) in by_head.get(h).into_iter().flatten() {
                    if xs.len() != ys.len() {
                        continue;
                    }
                    let args: Option<Vec<State>> =
                        xs.iter().zip(ys.iter()).map(|(x, y)| marked.get(&(x.clone(), y.clone())).cloned()).collect();
                    let Some(args) = args else { continue };
                    let pq = pair(p, q);
                    let t = Transition::Ground { head: h.clone(), args, target: pq.clone() };
                    if out.transitions.insert(t) {
                        changed = true;
                        marked.insert((p.clone(), (*q).clone()), pq);
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for ((p, q), pq) in &marked {
            out.states.insert(pq.clone());
            if a.finals.contains(p) && b.finals.contains(q) {
                out.finals.insert(pq.clone());
            }
        }
        out
    }

    /// States that some term reaches, following the marking algorithm.
    /// With `language_only`, interpreted-operator transitions are ignored:
    /// no term of the recognised language can use them.
    fn accessible(&self, language_only: bool) -> BTreeSet<State> {
        let mut marked = BTreeSet::new();
        loop {
            let mut changed = false;
            for t in &self.transitions {
                let fire = match t {
                    Transition::Lambda { .. } => true,
                    Transition::Ground { head: Head::Builtin(_), .. } if language_only => false,
                    Transition::Ground { args, .. } => args.iter().all(|q| marked.contains(q)),
                    Transition::Epsilon { from, .. } => marked.contains(from),
                };
                if fire && !marked.contains(t.target()) {
                    marked.insert(t.target().clone());
                    changed = true;
                }
            }
            if !changed {
                return marked;
            }
        }
    }

    /// Drops inaccessible states and every transition touching them.
    pub fn reduce(&self) -> Lta {
        let marked = self.accessible(false);
        Lta {
            alphabet: self.alphabet.clone(),
            states: marked.clone(),
            finals: self.finals.intersection(&marked).cloned().collect(),
            transitions: self
                .transitions
                .iter()
                .filter(|t| t.states().into_iter().all(|q| marked.contains(q)))
                .cloned()
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        let marked = self.accessible(true);
        self.finals.iter().all(|q| !marked.contains(q))
    }

    pub fn is_deterministic(&self) -> bool {
        if self.has_epsilons() {
            return false;
        }
        let mut seen: BTreeMap<(&Head, &[State]), &State> = BTreeMap::new();
        for (h, args, q) in self.grounds() {
            if let Some(prev) = seen.insert((h, args), q) {
                if prev != q {
                    return false;
                }
            }
        }
        let lambdas: Vec<_> = self.lambdas().collect();
        for (i, (l1, q1)) in lambdas.iter().enumerate() {
            for (l2, q2) in &lambdas[i + 1..] {
                if q1 != q2 && l1.overlaps(l2) {
                    return false;
                }
            }
        }
        true
    }

    /// Adds a sink state catching every atom and passive application that
    /// has no transition yet. Interpreted operators are left alone.
    pub fn complete(&self) -> Result<(Lta, State), AutomatonError> {
        if !self.is_deterministic() {
            return Err(AutomatonError::NonDeterministic);
        }
        let sink = self.fresh_name("sink");
        let mut out = self.clone();
        out.states.insert(sink.clone());
        let mut uncovered = vec![Interval::full()];
        for (v, _) in self.lambdas() {
            uncovered = uncovered.iter().flat_map(|u| u.difference(v)).collect();
        }
        for v in uncovered {
            out.transitions.insert(Transition::Lambda { value: v, target: sink.clone() });
        }
        let defined: BTreeSet<(&Head, &[State])> = self.grounds().map(|(h, a, _)| (h, a)).collect();
        let states: Vec<State> = out.states.iter().cloned().collect();
        let symbols: Vec<(String, usize)> = self.alphabet.passive().map(|(n, a)| (n.to_string(), a)).collect();
        let mut missing = Vec::new();
        for (name, arity) in symbols {
            let head = Head::Passive(name);
            for args in tuples(&states, arity) {
                if !defined.contains(&(&head, args.as_slice())) {
                    missing.push(Transition::Ground { head: head.clone(), args, target: sink.clone() });
                }
            }
        }
        out.transitions.extend(missing);
        Ok((out, sink))
    }

    /// Complement of a deterministic automaton: complete it, then flip the
    /// final states.
    pub fn complement(&self) -> Result<Lta, AutomatonError> {
        let (mut out, _) = self.complete()?;
        out.finals = out.states.difference(&self.finals).cloned().collect();
        Ok(out)
    }

    /// Checks `L(self) ⊆ L(other)`. A nondeterministic `other` is first
    /// determinized over `partition`, or over the partition cut at its own
    /// lambda endpoints when none is given (which loses nothing).
    pub fn included_in(&self, other: &Lta, partition: Option<&Partition>) -> Inclusion {
        let mut target = other.clone();
        target.alphabet = other.alphabet.merged(&self.alphabet);
        let mut approximate = false;
        if !target.is_deterministic() {
            let part = match partition {
                Some(p) => p.clone(),
                None => Partition::from_cuts(target.eliminate_epsilons().lambdas().map(|(v, _)| v)),
            };
            let report = partitioned::determinize_report(&Plta::from_lta(&target.eliminate_epsilons(), &part));
            approximate = report.approximate;
            target = report.result.into_base();
        }
        let complement = target.complement().expect("determinized automaton is deterministic");
        let product = self.intersection(&complement);
        let counterexample = product.witness();
        Inclusion { included: counterexample.is_none(), approximate, counterexample }
    }

    /// A smallest accepted term, if the language is nonempty.
    pub fn witness(&self) -> Option<Term> {
        let best = self.state_witnesses();
        self.finals.iter().filter_map(|q| best.get(q)).min_by_key(|t| (t.size(), (*t).clone())).cloned()
    }

    /// For each state, a smallest term of the language reaching it.
    pub fn state_witnesses(&self) -> BTreeMap<State, Term> {
        let mut best: BTreeMap<State, Term> = BTreeMap::new();
        let better = |cand: &Term, cur: Option<&Term>| match cur {
            None => true,
            Some(c) => (cand.size(), cand) < (c.size(), c),
        };
        loop {
            let mut changed = false;
            for t in &self.transitions {
                let cand = match t {
                    Transition::Lambda { value, .. } => value.atoms_within(1).atoms.into_iter().next().map(Term::Val),
                    Transition::Ground { head: Head::Passive(f), args, .. } => args
                        .iter()
                        .map(|q| best.get(q).cloned())
                        .collect::<Option<Vec<_>>>()
                        .map(|args| Term::app(f.clone(), args)),
                    Transition::Ground { head: Head::Builtin(_), .. } => None,
                    Transition::Epsilon { from, .. } => best.get(from).cloned(),
                };
                if let Some(c) = cand {
                    if better(&c, best.get(t.target())) {
                        best.insert(t.target().clone(), c);
                        changed = true;
                    }
                }
            }
            if !changed {
                return best;
            }
        }
    }
}

/// Cartesian product of the choice lists.
pub(crate) fn product<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for options in choices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// Every `n`-tuple over `items`, in lexicographic order.
pub(crate) fn tuples<T: Clone>(items: &[T], n: usize) -> Vec<Vec<T>> {
    product(&vec![items.to_vec(); n])
}

#[cfg(test)]
mod tests {
    use super::super::tests::{iv, running};
    use super::*;
    use crate::term::Alphabet;

    fn f(t: Term) -> Term {
        Term::app("f", vec![t])
    }

    fn single(lo: i64, hi: i64, q: &str, fin: &str) -> Lta {
        Lta::build(
            Alphabet::new([("f", 1)]),
            [Transition::lambda(Interval::range(lo, hi), q), Transition::ground("f", &[q], fin)],
            [State::from(fin)],
        )
        .unwrap()
    }

    #[test]
    fn union_renames_clashing_states() {
        let a = single(0, 0, "q1", "q2");
        let b = single(5, 5, "q1", "q2");
        let u = a.union(&b);
        assert!(u.states().contains(&State::from("q1'")));
        assert!(u.member(&f(Term::int(0))).unwrap());
        assert!(u.member(&f(Term::int(5))).unwrap());
        assert!(!u.member(&f(Term::int(3))).unwrap());
    }

    #[test]
    fn intersection_meets_lambda_values() {
        let a = single(1, 3, "q", "p");
        let b = single(2, 5, "q", "p");
        let i = a.intersection(&b);
        assert!(i.transitions().contains(&Transition::lambda(iv("[2,3]"), "q{q&q}")));
        assert!(i.member(&f(Term::int(3))).unwrap());
        assert!(!i.member(&f(Term::int(1))).unwrap());
        assert!(single(0, 1, "q", "p").intersection(&single(5, 6, "q", "p")).is_empty());
    }

    #[test]
    fn reduce_drops_unproductive_states() {
        let mut a = running();
        a.add_transition(Transition::ground("f", &["dead"], "q2")).unwrap();
        let r = a.reduce();
        assert!(!r.states().contains(&State::from("dead")));
        assert_eq!(r, running());
        assert!(!a.is_empty());
        assert!(Lta::new(Alphabet::new([("f", 1)])).is_empty());
    }

    #[test]
    fn determinism_excludes_overlaps_and_epsilons() {
        let lam = |a: &str, b: &str| {
            Lta::build(Alphabet::default(), [Transition::lambda(iv(a), "q1"), Transition::lambda(iv(b), "q2")], [])
                .unwrap()
        };
        assert!(!lam("[1,3]", "[2,5]").is_deterministic());
        assert!(lam("[1,3]", "[4,5]").is_deterministic());
        let mut a = running();
        a.add_transition(Transition::epsilon("q1", "q2")).unwrap();
        assert!(!a.is_deterministic());
    }

    #[test]
    fn complement_flips_membership() {
        let a = running();
        let c = a.complement().unwrap();
        for k in -3..8 {
            let t = f(Term::int(k));
            assert_ne!(a.member(&t).unwrap(), c.member(&t).unwrap(), "atom {k}");
        }
        assert!(c.member(&f(f(Term::int(1)))).unwrap());
        assert!(c.member(&Term::int(1)).unwrap());
        let mut nd = running();
        nd.add_transition(Transition::lambda(iv("[2,9]"), "q3")).unwrap();
        assert_eq!(nd.complement(), Err(AutomatonError::NonDeterministic));
    }

    #[test]
    fn inclusion_with_counterexample() {
        let small = single(0, 2, "q1", "q2");
        let big = single(0, 4, "q1", "q2");
        assert!(small.included_in(&big, None).included);
        let r = big.included_in(&small, None);
        assert!(!r.included);
        let cex = r.counterexample.unwrap();
        assert!(big.member(&cex).unwrap() && !small.member(&cex).unwrap());
        assert!(big.included_in(&big, None).included);
    }

    #[test]
    fn inclusion_against_nondeterministic_target_is_exact_by_default() {
        let target = single(0, 2, "q1", "q2").union(&single(5, 6, "q1", "q2"));
        let mut overlapping = target.clone();
        overlapping.add_transition(Transition::lambda(iv("[1,5]"), "q1")).unwrap();
        let probe = single(3, 3, "p", "r");
        let r = probe.included_in(&overlapping, None);
        assert!(r.included && !r.approximate);
        let probe = single(8, 8, "p", "r");
        assert!(!probe.included_in(&overlapping, None).included);
    }

    #[test]
    fn witness_is_smallest() {
        assert_eq!(running().witness(), Some(f(Term::val(iv("[0,0]")))));
        assert_eq!(Lta::new(Alphabet::default()).witness(), None);
    }
}
