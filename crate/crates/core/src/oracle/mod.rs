//! Brute-force ground truth for tests.
//!
//! Everything here works on the raw transition list of an automaton and
//! shares only the term representation with the engine: membership is a
//! direct recursion over transitions with epsilon paths searched on the
//! fly, and languages are enumerated up to a depth and an atom window.

pub mod random;
pub mod suites;

use crate::automaton::{Head, Lta, State, Transition};
use crate::lattice::{Bound, Interval, Lattice};
use crate::rewriting::{RewriteRule, Trs};
use crate::term::{BuiltinOp, Term};
use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet};

/// Limits of a bounded enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBounds {
    pub max_depth: usize,
    pub atom_lo: i64,
    pub atom_hi: i64,
    /// Cap on the number of terms kept per state and depth.
    pub max_terms: usize,
}

impl EnumBounds {
    pub fn new(max_depth: usize, atom_lo: i64, atom_hi: i64) -> Self {
        assert!(atom_lo <= atom_hi && max_depth > 0);
        EnumBounds { max_depth, atom_lo, atom_hi, max_terms: 200_000 }
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        assert!(max_terms > 0);
        self.max_terms = max_terms;
        self
    }

    fn window(&self) -> Interval {
        Interval::range(self.atom_lo, self.atom_hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Enumeration {
    pub terms: BTreeSet<Term>,
    /// Set when some state hit `max_terms` and terms were dropped.
    pub truncated: bool,
}

/// Whether `p` reaches `q` through zero or more epsilon transitions.
fn epsilon_path(a: &Lta, p: &State, q: &State) -> bool {
    let mut seen = BTreeSet::from([p.clone()]);
    let mut stack = vec![p.clone()];
    while let Some(s) = stack.pop() {
        if &s == q {
            return true;
        }
        for t in a.transitions() {
            if let Transition::Epsilon { from, to } = t {
                if from == &s && seen.insert(to.clone()) {
                    stack.push(to.clone());
                }
            }
        }
    }
    false
}

/// Integer value of an interpreted ground term whose leaves are integers
/// or atoms.
fn concrete_value(t: &Term) -> Option<BigInt> {
    match t {
        Term::Int(k) => Some(k.clone()),
        Term::Val(v) => v.as_atom().cloned(),
        Term::Op { op, args } if args.len() == 2 => {
            let a = concrete_value(&args[0])?;
            let b = concrete_value(&args[1])?;
            op.apply_concrete(&a, &b)
        }
        _ => None,
    }
}

/// Whether the ground term `t` reduces to `q`, by direct recursion.
pub fn accepts_at(a: &Lta, t: &Term, q: &State) -> bool {
    let value = concrete_value(t);
    a.transitions().iter().any(|tr| match tr {
        Transition::Lambda { value: lam, target } => {
            value.as_ref().is_some_and(|v| lam.contains(v)) && epsilon_path(a, target, q)
        }
        Transition::Ground { head, args, target } => {
            let (children, matches) = match (head, t) {
                (Head::Passive(f), Term::App { head: g, args: xs }) => (xs, f == g),
                (Head::Builtin(o), Term::Op { op, args: xs }) => (xs, o == op),
                _ => return false,
            };
            matches
                && children.len() == args.len()
                && epsilon_path(a, target, q)
                && children.iter().zip(args).all(|(c, p)| accepts_at(a, c, p))
        }
        Transition::Epsilon { .. } => false,
    })
}

/// Naive membership: `t` reduces to some final state.
pub fn naive_member(a: &Lta, t: &Term) -> bool {
    a.finals().iter().any(|q| accepts_at(a, t, q))
}

fn atoms_in(v: &Interval, window: &Interval) -> Vec<Term> {
    let clipped = v.glb(window);
    let Some((Bound::Int(lo), Bound::Int(hi))) = clipped.bounds() else { return Vec::new() };
    let mut out = Vec::new();
    let mut k = lo.clone();
    while &k <= hi {
        out.push(Term::Val(Interval::atom(k.clone())));
        k += 1;
    }
    out
}

/// Every combination picking one term per argument set.
fn products(sets: &[&BTreeSet<Term>], cap: usize, truncated: &mut bool) -> Vec<Vec<Term>> {
    let mut acc: Vec<Vec<Term>> = vec![Vec::new()];
    for set in sets {
        let mut next = Vec::new();
        'outer: for prefix in &acc {
            for t in set.iter() {
                if next.len() >= cap {
                    *truncated = true;
                    break 'outer;
                }
                let mut v = prefix.clone();
                v.push(t.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

fn insert_capped(set: &mut BTreeSet<Term>, t: Term, cap: usize, truncated: &mut bool) {
    if set.len() < cap {
        set.insert(t);
    } else if !set.contains(&t) {
        *truncated = true;
    }
}

/// Terms of depth at most `b.max_depth` over passive symbols and atoms
/// within the window, reducing to each state. Built bottom-up, one depth
/// layer at a time.
pub fn enumerate_states(a: &Lta, b: &EnumBounds) -> (BTreeMap<State, BTreeSet<Term>>, bool) {
    let window = b.window();
    let mut truncated = false;
    let states: Vec<State> = a.states().iter().cloned().collect();
    // Direct transitions, then spread along epsilon paths.
    let into = |p: &State| states.iter().filter(|q| epsilon_path(a, p, q)).cloned().collect::<Vec<_>>();
    let mut layer: BTreeMap<State, BTreeSet<Term>> = states.iter().map(|q| (q.clone(), BTreeSet::new())).collect();
    for depth in 1..=b.max_depth {
        let mut next = layer.clone();
        for tr in a.transitions() {
            let (produced, target) = match tr {
                Transition::Lambda { value, target } if depth == 1 => (atoms_in(value, &window), target),
                Transition::Ground { head: Head::Passive(f), args, target } if args.is_empty() && depth == 1 => {
                    (vec![Term::constant(f.clone())], target)
                }
                Transition::Ground { head: Head::Passive(f), args, target } if !args.is_empty() && depth > 1 => {
                    let sets: Vec<&BTreeSet<Term>> = args.iter().map(|p| &layer[p]).collect();
                    let combos = products(&sets, b.max_terms, &mut truncated);
                    (combos.into_iter().map(|xs| Term::app(f.clone(), xs)).collect(), target)
                }
                _ => continue,
            };
            for q in into(target) {
                let set = next.get_mut(&q).expect("state");
                for t in &produced {
                    insert_capped(set, t.clone(), b.max_terms, &mut truncated);
                }
            }
        }
        layer = next;
    }
    (layer, truncated)
}

/// The language of `a` within the bounds.
pub fn enumerate_language(a: &Lta, b: &EnumBounds) -> Enumeration {
    let (by_state, truncated) = enumerate_states(a, b);
    let mut terms = BTreeSet::new();
    for q in a.finals() {
        if let Some(ts) = by_state.get(q) {
            terms.extend(ts.iter().cloned());
        }
    }
    Enumeration { terms, truncated }
}

/// A second enumerator: candidate terms are generated from the alphabet
/// alone, depth by depth, and kept when [`naive_member`] accepts them.
/// Only usable for small alphabets and windows.
pub fn enumerate_generate_and_test(a: &Lta, b: &EnumBounds) -> Enumeration {
    let window = b.window();
    let mut truncated = false;
    let symbols: Vec<(String, usize)> = a.alphabet().passive().map(|(f, n)| (f.to_string(), n)).collect();
    // All candidate terms of depth ≤ d, restricted at each level to those
    // accepted by some state so the search stays small.
    let accepted_somewhere = |t: &Term| a.states().iter().any(|q| accepts_at(a, t, q));
    let mut pool: BTreeSet<Term> = atoms_in(&window, &window).into_iter().filter(|t| accepted_somewhere(t)).collect();
    for (f, n) in &symbols {
        if *n == 0 {
            let c = Term::constant(f.clone());
            if accepted_somewhere(&c) {
                pool.insert(c);
            }
        }
    }
    for _ in 1..b.max_depth {
        let mut next = pool.clone();
        for (f, n) in &symbols {
            if *n == 0 {
                continue;
            }
            let sets: Vec<&BTreeSet<Term>> = std::iter::repeat_n(&pool, *n).collect();
            for xs in products(&sets, b.max_terms, &mut truncated) {
                let t = Term::app(f.clone(), xs);
                if accepted_somewhere(&t) {
                    insert_capped(&mut next, t, b.max_terms, &mut truncated);
                }
            }
        }
        pool = next;
    }
    Enumeration { terms: pool.into_iter().filter(|t| naive_member(a, t)).collect(), truncated }
}

/// Syntactic matching of a left-linear pattern, binding variables to
/// subterms.
fn bind(pattern: &Term, subject: &Term, sigma: &mut BTreeMap<String, Term>) -> bool {
    match (pattern, subject) {
        (Term::Var(x), _) => sigma.insert(x.clone(), subject.clone()).is_none_or(|old| &old == subject),
        (Term::App { head: f, args: xs }, Term::App { head: g, args: ys }) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| bind(x, y, sigma))
        }
        _ => pattern == subject,
    }
}

fn plug(t: &Term, sigma: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(x) => sigma.get(x).cloned().unwrap_or_else(|| t.clone()),
        Term::App { head, args } => Term::app(head.clone(), args.iter().map(|a| plug(a, sigma)).collect()),
        Term::Op { op, args } => Term::Op { op: *op, args: args.iter().map(|a| plug(a, sigma)).collect() },
        _ => t.clone(),
    }
}

/// Replaces every operator application with integer arguments by the
/// resulting atom, and integer leaves by atoms.
pub fn evaluate(t: &Term) -> Term {
    match t {
        Term::Int(k) => Term::Val(Interval::atom(k.clone())),
        Term::App { head, args } => Term::app(head.clone(), args.iter().map(evaluate).collect()),
        Term::Op { op, args } => {
            let args: Vec<Term> = args.iter().map(evaluate).collect();
            let folded = Term::Op { op: *op, args };
            match concrete_value(&folded) {
                Some(v) => Term::Val(Interval::atom(v)),
                None => folded,
            }
        }
        _ => t.clone(),
    }
}

/// Every evaluated term obtained from `t` by one rule application at one
/// position. Conditions must evaluate to integers on both sides and hold.
pub fn one_step_successors(trs: &Trs, t: &Term) -> BTreeSet<Term> {
    fn walk(trs: &Trs, t: &Term, wrap: &dyn Fn(Term) -> Term, out: &mut BTreeSet<Term>) {
        for rule in &trs.rules {
            let mut sigma = BTreeMap::new();
            if !bind(&rule.lhs, t, &mut sigma) {
                continue;
            }
            let ok = rule.conditions.iter().all(|c| {
                match (concrete_value(&plug(&c.lhs, &sigma)), concrete_value(&plug(&c.rhs, &sigma))) {
                    (Some(l), Some(r)) => c.relation.holds(&l, &r),
                    _ => false,
                }
            });
            if ok {
                out.insert(evaluate(&wrap(plug(&rule.rhs, &sigma))));
            }
        }
        let rebuild = |i: usize, c: Term| -> Term {
            match t {
                Term::App { head, args } => {
                    let mut args = args.clone();
                    args[i] = c;
                    Term::app(head.clone(), args)
                }
                Term::Op { op, args } => {
                    let mut args = args.clone();
                    args[i] = c;
                    Term::Op { op: *op, args }
                }
                _ => unreachable!("leaves have no children"),
            }
        };
        for (i, child) in t.children().iter().enumerate() {
            walk(trs, child, &|c| wrap(rebuild(i, c)), out);
        }
    }
    let mut out = BTreeSet::new();
    walk(trs, t, &|c| c, &mut out);
    out
}

/// Step counts for adding two naturals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeanoReport {
    /// Rewrite steps with unary successor/predecessor numbers.
    pub peano_steps: usize,
    /// Rewrite steps with a single rule delegating to integer addition.
    pub builtin_steps: usize,
}

fn peano_numeral(n: i64) -> Term {
    let step = if n >= 0 { "succ" } else { "pred" };
    (0..n.unsigned_abs()).fold(Term::constant("zero"), |t, _| Term::app(step, vec![t]))
}

fn peano_value(t: &Term) -> Option<i64> {
    match t {
        Term::App { head, args } if head == "zero" && args.is_empty() => Some(0),
        Term::App { head, args } if head == "succ" && args.len() == 1 => Some(peano_value(&args[0])? + 1),
        Term::App { head, args } if head == "pred" && args.len() == 1 => Some(peano_value(&args[0])? - 1),
        _ => None,
    }
}

/// Addition on unary numbers: `xadd` moves units from its right argument to
/// its left one until the right is zero, then wraps the sum in `result`.
pub fn peano_trs() -> Trs {
    let v = Term::var;
    let app = |f: &str, xs: Vec<Term>| Term::app(f, xs);
    let succ = |t: Term| Term::app("succ", vec![t]);
    let pred = |t: Term| Term::app("pred", vec![t]);
    let zero = || Term::constant("zero");
    let xadd = |l: Term, r: Term| Term::app("xadd", vec![l, r]);
    let rule = |l: Term, r: Term| RewriteRule::new(l, r, Vec::new()).expect("well-formed rule");
    let rules = vec![
        rule(xadd(zero(), zero()), app("result", vec![zero()])),
        rule(xadd(succ(v("a")), pred(v("b"))), xadd(v("a"), v("b"))),
        rule(xadd(pred(v("a")), succ(v("b"))), xadd(v("a"), v("b"))),
        rule(xadd(succ(v("a")), succ(v("b"))), xadd(succ(succ(v("a"))), v("b"))),
        rule(xadd(pred(v("a")), pred(v("b"))), xadd(pred(pred(v("a"))), v("b"))),
        rule(xadd(succ(v("a")), zero()), app("result", vec![succ(v("a"))])),
        rule(xadd(pred(v("a")), zero()), app("result", vec![pred(v("a"))])),
        rule(xadd(zero(), succ(v("b"))), app("result", vec![succ(v("b"))])),
        rule(xadd(zero(), pred(v("b"))), app("result", vec![pred(v("b"))])),
    ];
    Trs { name: "peano".into(), rules }
}

/// Adds `x` and `y` both ways and counts rewrite steps. Panics if the two
/// computations disagree on the sum.
pub fn peano_benchmark(x: u64, y: u64) -> PeanoReport {
    let (x, y) = (x as i64, y as i64);
    let budget = 4 * (x + y) as usize + 16;
    let start = Term::app("xadd", vec![peano_numeral(x), peano_numeral(y)]);
    let (nf, peano_steps) = peano_trs().normalize(&start, budget).expect("ground start term");
    let sum = match &nf {
        Term::App { head, args } if head == "result" && args.len() == 1 => peano_value(&args[0]),
        _ => None,
    };
    assert_eq!(sum, Some(x + y), "unary addition did not reach a result");

    let rule = RewriteRule::new(
        Term::app("xadd", vec![Term::var("a"), Term::var("b")]),
        Term::op(BuiltinOp::Add, Term::var("a"), Term::var("b")),
        Vec::new(),
    )
    .expect("well-formed rule");
    let builtin = Trs { name: "builtin".into(), rules: vec![rule] };
    let start = Term::app("xadd", vec![Term::int(x), Term::int(y)]);
    let (nf, builtin_steps) = builtin.normalize(&start, budget).expect("ground start term");
    assert_eq!(nf, Term::int(x + y), "builtin addition disagrees");
    PeanoReport { peano_steps, builtin_steps }
}
