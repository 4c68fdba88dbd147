use lta_core::automaton::Lta;
use lta_core::completion::{complete, eval_with, Widening};
use lta_core::lattice::{Bound, Interval, Lattice, Partition};
use lta_core::oracle::random::{self, AutomatonShape};
use lta_core::oracle::{enumerate_language, naive_member, EnumBounds};
use lta_core::partitioned::{determinize, Plta};
use lta_core::solver::{ConstraintSystem, StrictMode};
use lta_core::term::Term;
use num_bigint::BigInt;
use proptest::prelude::*;

fn bound() -> impl Strategy<Value = Option<i64>> {
    prop_oneof![1 => Just(None), 6 => (-30i64..=30).prop_map(Some)]
}

fn interval() -> impl Strategy<Value = Interval> {
    (bound(), bound()).prop_map(|(lo, hi)| {
        Interval::new(lo.map(Bound::int).unwrap_or(Bound::NegInf), hi.map(Bound::int).unwrap_or(Bound::PosInf))
    })
}

/// An integer and an interval containing it.
fn around() -> impl Strategy<Value = (i64, Interval)> {
    let side = || prop_oneof![1 => Just(None), 6 => (0i64..=20).prop_map(Some)];
    (-30i64..=30, side(), side()).prop_map(|(x, below, above)| {
        let lo = below.map(|d| Bound::int(x - d)).unwrap_or(Bound::NegInf);
        let hi = above.map(|d| Bound::int(x + d)).unwrap_or(Bound::PosInf);
        (x, Interval::new(lo, hi))
    })
}

fn member(v: &Interval, k: i64) -> bool {
    v.contains(&BigInt::from(k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn join_and_meet_are_bounds(a in interval(), b in interval()) {
        let j = a.lub(&b);
        let m = a.glb(&b);
        prop_assert!(a.leq(&j) && b.leq(&j));
        prop_assert!(m.leq(&a) && m.leq(&b));
        prop_assert_eq!(j.clone(), b.lub(&a));
        prop_assert_eq!(m.clone(), b.glb(&a));
        prop_assert_eq!(a.lub(&a.glb(&b)), a.clone());
        prop_assert_eq!(a.glb(&a.lub(&b)), a.clone());
        prop_assert_eq!(a.leq(&b), a.lub(&b) == b);
    }

    #[test]
    fn meet_is_exact_on_integers(a in interval(), b in interval(), k in -40i64..=40) {
        prop_assert_eq!(member(&a.glb(&b), k), member(&a, k) && member(&b, k));
        if member(&a, k) || member(&b, k) {
            prop_assert!(member(&a.lub(&b), k));
        }
    }

    #[test]
    fn widening_bounds_both_arguments(a in interval(), b in interval()) {
        let w = a.widen(&a.lub(&b));
        prop_assert!(a.leq(&w));
        prop_assert!(b.leq(&w));
    }

    #[test]
    fn widening_chains_stabilise(start in interval(), steps in prop::collection::vec(interval(), 1..40)) {
        let mut cur = start;
        let mut changes = 0;
        for s in steps {
            let next = cur.widen(&cur.lub(&s));
            if next != cur {
                changes += 1;
            }
            cur = next;
        }
        // Each change either opens a bound to infinity or leaves bottom.
        prop_assert!(changes <= 3, "{changes} changes");
    }

    #[test]
    fn arithmetic_is_sound((x, a) in around(), (y, b) in around()) {
        prop_assert!(member(&a.add(&b), x + y));
        prop_assert!(member(&a.sub(&b), x - y));
        prop_assert!(member(&a.mul(&b), x * y));
    }

    #[test]
    fn abstraction_orders_terms(x in -20i64..=20, a in interval()) {
        let leaf = Term::app("f", vec![Term::int(x)]).abstracted();
        let wide = Term::app("f", vec![Term::val(a.clone())]);
        prop_assert!(leaf.leq(&leaf));
        prop_assert_eq!(leaf.leq(&wide), member(&a, x));
    }

    #[test]
    fn cut_partitions_cover_each_integer_once(values in prop::collection::vec(interval(), 0..6), k in -40i64..=40) {
        let p = Partition::from_cuts(values.iter());
        let hits = p.blocks().iter().filter(|b| member(b, k)).count();
        prop_assert_eq!(hits, 1);
        for v in values.iter().filter(|v| !v.is_bottom()) {
            for (block, part) in p.block_of(v) {
                prop_assert_eq!(block, &part, "{} cuts block {}", v, block);
            }
        }
    }

    #[test]
    fn solver_keeps_every_integer_solution(seed in any::<u64>()) {
        let sys = random::linear_system(&mut random::rng(seed), 20);
        let input = sys.input_box();
        let cs = ConstraintSystem::from_predicates(&sys.predicates(), StrictMode::Relaxed).unwrap();
        let solutions = sys.solutions();
        match cs.solve_box(&input) {
            None => prop_assert!(solutions.is_empty(), "{} solutions lost", solutions.len()),
            Some(found) => {
                for s in &solutions {
                    for (name, v) in sys.vars.iter().zip(s) {
                        prop_assert!(member(&found[name], *v), "{name}={v} outside {}", found[name]);
                    }
                }
            }
        }
    }
}

fn small_automaton(seed: u64) -> Lta {
    random::automaton(&mut random::rng(seed), &AutomatonShape::small())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn membership_agrees_with_naive_recursion(seed in any::<u64>()) {
        let a = small_automaton(seed);
        let bounds = EnumBounds::new(3, -4, 4).with_max_terms(5_000);
        for t in enumerate_language(&a, &bounds).terms {
            prop_assert!(a.member(&t).unwrap());
            prop_assert!(naive_member(&a, &t));
        }
    }

    #[test]
    fn reduction_preserves_the_language(seed in any::<u64>()) {
        let a = small_automaton(seed);
        let bounds = EnumBounds::new(3, -4, 4).with_max_terms(5_000);
        let before = enumerate_language(&a, &bounds);
        let after = enumerate_language(&a.reduce(), &bounds);
        prop_assume!(!before.truncated && !after.truncated);
        prop_assert_eq!(before.terms, after.terms);
    }

    #[test]
    fn determinization_over_approximates(seed in any::<u64>()) {
        let a = small_automaton(seed);
        let part = Partition::from_cuts(a.eliminate_epsilons().lambdas().map(|(v, _)| v));
        let d = determinize(&Plta::from_lta(&a, &part));
        prop_assert!(d.base().is_deterministic());
        let bounds = EnumBounds::new(3, -4, 4).with_max_terms(5_000);
        let la = enumerate_language(&a, &bounds);
        prop_assume!(!la.truncated);
        for t in la.terms {
            prop_assert!(d.base().member(&t).unwrap(), "{} lost", t);
        }
    }

    #[test]
    fn evaluation_terminates_on_operator_loops(seed in any::<u64>(), widen_after in 1usize..5) {
        let a = random::looping_automaton(&mut random::rng(seed));
        let ev = eval_with(&a, &mut Widening::new(widen_after));
        prop_assert!(ev.passes <= 10 * widen_after, "{} passes", ev.passes);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn completion_is_deterministic_and_a_fixpoint(seed in 0u64..2_000) {
        let (a, trs, cfg) = lta_core::oracle::suites::completion_instance(seed);
        let first = complete(&a, &trs, &cfg).unwrap();
        let second = complete(&a, &trs, &cfg).unwrap();
        prop_assert_eq!(&first.automaton, &second.automaton);
        prop_assert_eq!(first.trace_text(), second.trace_text());
        if first.converged {
            let again = complete(&first.automaton, &trs, &cfg).unwrap();
            prop_assert!(again.converged);
            prop_assert_eq!(again.automaton.transitions(), first.automaton.transitions());
        }
    }
}
