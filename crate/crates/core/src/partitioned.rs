//! Partitioned automata: splitting, merging, determinization, minimization
//! and partition refinement.

use crate::automaton::{AutomatonError, Head, Lta, State, Transition};
use crate::lattice::{Interval, Lattice, Partition};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionedError {
    #[error("partition {finer} does not refine {coarser}")]
    NotARefinement { finer: Partition, coarser: Partition },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// An automaton whose lambda values each lie inside one partition block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plta {
    base: Lta,
    partition: Partition,
}

/// Determinization result with a note on precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetReport {
    pub result: Plta,
    /// Some block held lambda values that were not all equal, so their join
    /// may accept atoms the input did not.
    pub approximate: bool,
}

impl Plta {
    /// Splits every lambda along the partition blocks.
    pub fn from_lta(a: &Lta, partition: &Partition) -> Plta {
        let mut base = Lta::new(a.alphabet().clone());
        for q in a.states() {
            base.add_state(q.clone());
        }
        base.set_finals(a.finals().clone());
        for t in a.transitions() {
            match t {
                Transition::Lambda { value, target } => {
                    for (_, part) in partition.block_of(value) {
                        insert(&mut base, Transition::Lambda { value: part, target: target.clone() });
                    }
                }
                other => insert(&mut base, other.clone()),
            }
        }
        Plta { base, partition: partition.clone() }
    }

    pub fn base(&self) -> &Lta {
        &self.base
    }

    pub fn into_base(self) -> Lta {
        self.base
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    fn block_index(&self, v: &Interval) -> usize {
        self.partition.blocks().iter().position(|b| v.leq(b)).expect("lambda values lie inside one block")
    }

    /// Fuses, per target state and block, all lambda values into their join.
    /// States are never fused.
    pub fn merge(&self) -> Plta {
        let mut fused: BTreeMap<(State, usize), Interval> = BTreeMap::new();
        let mut base = self.without_lambdas();
        for (v, q) in self.base.lambdas() {
            let slot = fused.entry((q.clone(), self.block_index(v))).or_insert(Interval::BOTTOM);
            *slot = slot.lub(v);
        }
        for ((q, _), v) in fused {
            insert(&mut base, Transition::Lambda { value: v, target: q });
        }
        Plta { base, partition: self.partition.clone() }
    }

    pub fn is_merged(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.base.lambdas().all(|(v, q)| seen.insert((q.clone(), self.block_index(v))))
    }

    /// Re-splits the lambdas along a finer partition.
    pub fn refine(&self, finer: &Partition) -> Result<Plta, PartitionedError> {
        if !finer.refines(&self.partition) {
            return Err(PartitionedError::NotARefinement { finer: finer.clone(), coarser: self.partition.clone() });
        }
        Ok(Plta::from_lta(&self.base, finer))
    }

    fn without_lambdas(&self) -> Lta {
        let mut base = Lta::new(self.base.alphabet().clone());
        for q in self.base.states() {
            base.add_state(q.clone());
        }
        base.set_finals(self.base.finals().clone());
        for t in self.base.transitions() {
            if !matches!(t, Transition::Lambda { .. }) {
                insert(&mut base, t.clone());
            }
        }
        base
    }
}

fn insert(a: &mut Lta, t: Transition) {
    a.add_transition(t).expect("transition copied from a valid automaton");
}

/// Subset construction with per-block lambda fusion.
pub fn determinize(a: &Plta) -> Plta {
    determinize_report(a).result
}

pub fn determinize_report(a: &Plta) -> DetReport {
    let input = a.base.eliminate_epsilons();
    let mut sets: BTreeSet<BTreeSet<State>> = BTreeSet::new();
    let mut lambdas: Vec<(Interval, BTreeSet<State>)> = Vec::new();
    let mut approximate = false;
    for block in a.partition.blocks() {
        let trans: Vec<(&Interval, &State)> = input.lambdas().filter(|(v, _)| v.leq(block)).collect();
        if trans.is_empty() {
            continue;
        }
        let joined = trans.iter().fold(Interval::BOTTOM, |acc, (v, _)| acc.lub(v));
        approximate |= trans.iter().any(|(v, _)| **v != joined);
        let set: BTreeSet<State> = trans.iter().map(|(_, q)| (*q).clone()).collect();
        sets.insert(set.clone());
        lambdas.push((joined, set));
    }

    let mut by_head: BTreeMap<&Head, Vec<(&[State], &State)>> = BTreeMap::new();
    for (h, args, q) in input.grounds() {
        by_head.entry(h).or_default().push((args, q));
    }
    let mut grounds: BTreeSet<(Head, Vec<BTreeSet<State>>, BTreeSet<State>)> = BTreeSet::new();
    loop {
        let known: Vec<BTreeSet<State>> = sets.iter().cloned().collect();
        let mut added = false;
        for (head, trans) in &by_head {
            let arities: BTreeSet<usize> = trans.iter().map(|(args, _)| args.len()).collect();
            for n in arities {
                for tuple in crate::automaton::tuples_of(&known, n) {
                    let target: BTreeSet<State> = trans
                        .iter()
                        .filter(|(args, _)| args.len() == n && args.iter().zip(&tuple).all(|(q, s)| s.contains(q)))
                        .map(|(_, q)| (*q).clone())
                        .collect();
                    if target.is_empty() {
                        continue;
                    }
                    sets.insert(target.clone());
                    added |= grounds.insert(((*head).clone(), tuple, target));
                }
            }
        }
        if !added {
            break;
        }
    }

    let names = set_names(&sets);
    let mut base = Lta::new(input.alphabet().clone());
    for s in &sets {
        base.add_state(names[s].clone());
        if s.iter().any(|q| input.is_final(q)) {
            base.add_final(names[s].clone());
        }
    }
    for (v, s) in lambdas {
        insert(&mut base, Transition::Lambda { value: v, target: names[&s].clone() });
    }
    for (head, args, target) in grounds {
        let args = args.iter().map(|s| names[s].clone()).collect();
        insert(&mut base, Transition::Ground { head, args, target: names[&target].clone() });
    }
    DetReport { result: Plta { base, partition: a.partition.clone() }, approximate }
}

/// Names state sets `q{a,b}`, dropping a leading `q` from member names when
/// that keeps names distinct.
fn set_names(sets: &BTreeSet<BTreeSet<State>>) -> BTreeMap<BTreeSet<State>, State> {
    let render = |s: &BTreeSet<State>, strip: bool| {
        let members: Vec<&str> = s
            .iter()
            .map(|q| match q.name().strip_prefix('q') {
                Some(rest) if strip && !rest.is_empty() => rest,
                _ => q.name(),
            })
            .collect();
        State::new(format!("q{{{}}}", members.join(",")))
    };
    let short: BTreeMap<_, _> = sets.iter().map(|s| (s.clone(), render(s, true))).collect();
    let distinct: BTreeSet<&State> = short.values().collect();
    if distinct.len() == short.len() {
        short
    } else {
        sets.iter().map(|s| (s.clone(), render(s, false))).collect()
    }
}

/// Collapses equivalent states of a deterministic automaton, joining the
/// lambda values of each class per block.
pub fn minimize(a: &Plta) -> Result<Plta, PartitionedError> {
    let base = &a.base;
    if !base.is_deterministic() {
        return Err(AutomatonError::NonDeterministic.into());
    }
    let states: Vec<State> = base.states().iter().cloned().collect();
    let mut class: BTreeMap<State, usize> =
        states.iter().map(|q| (q.clone(), usize::from(!base.is_final(q)))).collect();

    type Context = (Head, usize, Vec<State>);
    let mut contexts: BTreeMap<State, Vec<(Context, State)>> = BTreeMap::new();
    let mut constants: BTreeMap<State, BTreeSet<Head>> = BTreeMap::new();
    for (h, args, target) in base.grounds() {
        if args.is_empty() {
            constants.entry(target.clone()).or_default().insert(h.clone());
        }
        for (i, q) in args.iter().enumerate() {
            let mut others = args.to_vec();
            others.remove(i);
            contexts.entry(q.clone()).or_default().push(((h.clone(), i, others), target.clone()));
        }
    }
    let mut blocks: BTreeMap<State, BTreeSet<usize>> = BTreeMap::new();
    for (v, q) in base.lambdas() {
        blocks.entry(q.clone()).or_default().insert(a.block_index(v));
    }

    loop {
        let signature = |q: &State| {
            let ctx: BTreeMap<&Context, usize> =
                contexts.get(q).into_iter().flatten().map(|(c, t)| (c, class[t])).collect();
            (class[q], blocks.get(q).cloned().unwrap_or_default(), constants.get(q).cloned().unwrap_or_default(), ctx)
        };
        let mut ids = BTreeMap::new();
        let next: BTreeMap<State, usize> = states
            .iter()
            .map(|q| {
                let n = ids.len();
                (q.clone(), *ids.entry(signature(q)).or_insert(n))
            })
            .collect();
        let stable = ids.len() == class.values().collect::<BTreeSet<_>>().len();
        class = next;
        if stable {
            break;
        }
    }

    let mut members: BTreeMap<usize, Vec<&State>> = BTreeMap::new();
    for q in &states {
        members.entry(class[q]).or_default().push(q);
    }
    let rep = |q: &State| members[&class[q]][0].clone();
    let mut out = Lta::new(base.alphabet().clone());
    for q in &states {
        out.add_state(rep(q));
        if base.is_final(q) {
            out.add_final(rep(q));
        }
    }
    let mut fused: BTreeMap<(State, usize), Interval> = BTreeMap::new();
    for t in base.transitions() {
        match t {
            Transition::Lambda { value, target } => {
                let slot = fused.entry((rep(target), a.block_index(value))).or_insert(Interval::BOTTOM);
                *slot = slot.lub(value);
            }
            other => insert(&mut out, other.map_states(rep)),
        }
    }
    for ((q, _), v) in fused {
        insert(&mut out, Transition::Lambda { value: v, target: q });
    }
    Ok(Plta { base: out, partition: a.partition.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Alphabet, Term};

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }

    fn signs() -> Partition {
        Partition::new(vec![iv("]-inf,0["), iv("[0,0]"), iv("]0,+inf[")]).unwrap()
    }

    fn ex_part() -> Lta {
        Lta::build(
            Alphabet::new([("f", 2)]),
            [
                Transition::lambda(iv("[-3,-1]"), "q1"),
                Transition::lambda(iv("[-5,-2]"), "q2"),
                Transition::lambda(iv("[3,4]"), "q3"),
                Transition::lambda(iv("[-3,2]"), "q4"),
                Transition::ground("f", &["q1", "q2"], "q5"),
                Transition::ground("f", &["q3", "q4"], "q6"),
                Transition::ground("f", &["q5", "q6"], "qf1"),
                Transition::ground("f", &["q5", "q6"], "qf2"),
            ],
            [State::from("qf1"), State::from("qf2")],
        )
        .unwrap()
    }

    fn transitions(a: &Lta) -> BTreeSet<String> {
        a.transitions().iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn splitting_follows_blocks() {
        let a = Lta::build(
            Alphabet::new([("f", 2)]),
            [
                Transition::lambda(iv("[3,4]"), "q1"),
                Transition::lambda(iv("[-3,2]"), "q2"),
                Transition::ground("f", &["q1", "q2"], "qf"),
            ],
            [State::from("qf")],
        )
        .unwrap();
        let p = Plta::from_lta(&a, &signs());
        let expected: BTreeSet<String> =
            ["[3,4] -> q1", "[-3,-1] -> q2", "[0,0] -> q2", "[1,2] -> q2", "f(q1,q2) -> qf"].map(String::from).into();
        assert_eq!(transitions(p.base()), expected);
    }

    #[test]
    fn merge_joins_per_state_and_block() {
        let a = Lta::build(
            Alphabet::default(),
            [
                Transition::lambda(iv("[-3,-1]"), "q1"),
                Transition::lambda(iv("[-5,-2]"), "q1"),
                Transition::lambda(iv("[3,4]"), "q1"),
            ],
            [],
        )
        .unwrap();
        let m = Plta::from_lta(&a, &signs()).merge();
        assert!(m.is_merged());
        let expected: BTreeSet<String> = ["[-5,-1] -> q1", "[3,4] -> q1"].map(String::from).into();
        assert_eq!(transitions(m.base()), expected);
    }

    #[test]
    fn determinization_of_the_sign_example() {
        let d = determinize(&Plta::from_lta(&ex_part(), &signs()));
        let expected: BTreeSet<String> = [
            "[-5,-1] -> q{1,2,4}",
            "[1,4] -> q{3,4}",
            "[0,0] -> q{4}",
            "f(q{1,2,4},q{1,2,4}) -> q{5}",
            "f(q{3,4},q{3,4}) -> q{6}",
            "f(q{3,4},q{4}) -> q{6}",
            "f(q{3,4},q{1,2,4}) -> q{6}",
            "f(q{5},q{6}) -> q{f1,f2}",
        ]
        .map(String::from)
        .into();
        assert_eq!(transitions(d.base()), expected);
        assert!(d.base().is_deterministic());
        assert!(d.is_merged());
        assert_eq!(d.base().finals(), &BTreeSet::from([State::from("q{f1,f2}")]));
    }

    #[test]
    fn refinement_requires_a_finer_partition() {
        let p = Plta::from_lta(&ex_part(), &signs());
        let finer = Partition::new(vec![iv("]-inf,-1["), iv("[-1,0["), iv("[0,0]"), iv("]0,+inf[")]).unwrap();
        let r = p.refine(&finer).unwrap();
        assert!(transitions(r.base()).contains("[-1,-1] -> q1"));
        assert!(transitions(r.base()).contains("[-3,-2] -> q1"));
        assert!(matches!(p.refine(&Partition::trivial()), Err(PartitionedError::NotARefinement { .. })));
        assert_eq!(p.refine(&signs()).unwrap(), p);
    }

    #[test]
    fn minimization_collapses_twins() {
        let a = Lta::build(
            Alphabet::new([("g", 1)]),
            [
                Transition::lambda(iv("[1,1]"), "q1"),
                Transition::lambda(iv("[3,3]"), "q2"),
                Transition::ground("g", &["q1"], "q3"),
                Transition::ground("g", &["q2"], "q3"),
            ],
            [State::from("q3")],
        )
        .unwrap();
        let p = Plta::from_lta(&a, &signs());
        let m = minimize(&p).unwrap();
        assert_eq!(m.base().states().len(), 2);
        assert!(transitions(m.base()).contains("[1,3] -> q1"));
        assert!(m.base().is_deterministic());
        for k in [1, 2, 3] {
            assert!(m.base().member(&Term::app("g", vec![Term::int(k)])).unwrap());
        }
        let again = minimize(&m).unwrap();
        assert_eq!(again.base().states().len(), 2);
    }

    #[test]
    fn minimization_rejects_nondeterminism() {
        let p = Plta::from_lta(&ex_part(), &signs());
        assert!(minimize(&p).is_err());
    }
}
