//! Seeded generators for small random automata, rewrite systems and
//! linear constraint systems.

use crate::automaton::{Head, Lta, State, Transition};
use crate::lattice::{Bound, Interval};
use crate::rewriting::{Equation, EquationSet, Predicate, Relation, RewriteRule, Trs};
use crate::solver::IntervalBox;
use crate::term::{Alphabet, BuiltinOp, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of generated automata.
#[derive(Debug, Clone)]
pub struct AutomatonShape {
    pub alphabet: Alphabet,
    pub max_states: usize,
    pub max_lambdas: usize,
    pub max_grounds: usize,
    pub max_epsilons: usize,
    /// Lambda lower bounds are drawn from this range.
    pub atom_lo: i64,
    pub atom_hi: i64,
    pub max_width: i64,
    /// Probability that a lambda is unbounded on one side.
    pub unbounded: f64,
    /// Probability that a ground transition uses a builtin operator.
    pub builtin: f64,
}

impl AutomatonShape {
    /// `a:0 f:1 g:2` with `+` and `-`, up to four states.
    pub fn small() -> Self {
        AutomatonShape {
            alphabet: Alphabet::new([("a", 0), ("f", 1), ("g", 2)]).with_builtins([BuiltinOp::Add, BuiltinOp::Sub]),
            max_states: 4,
            max_lambdas: 2,
            max_grounds: 3,
            max_epsilons: 1,
            atom_lo: -10,
            atom_hi: 10,
            max_width: 3,
            unbounded: 0.1,
            builtin: 0.0,
        }
    }
}

fn state(i: usize) -> State {
    State::from(format!("q{i}").as_str())
}

fn random_interval(rng: &mut impl Rng, shape: &AutomatonShape) -> Interval {
    let lo = rng.gen_range(shape.atom_lo..=shape.atom_hi);
    let hi = lo + rng.gen_range(0..=shape.max_width);
    if rng.gen_bool(shape.unbounded) {
        if rng.gen_bool(0.5) {
            Interval::new(Bound::NegInf, Bound::int(hi))
        } else {
            Interval::new(Bound::int(lo), Bound::PosInf)
        }
    } else {
        Interval::range(lo, hi)
    }
}

/// A random automaton over `shape.alphabet`.
pub fn automaton(rng: &mut impl Rng, shape: &AutomatonShape) -> Lta {
    let n = rng.gen_range(1..=shape.max_states);
    let passive: Vec<(String, usize)> = shape.alphabet.passive().map(|(f, k)| (f.to_string(), k)).collect();
    let ops: Vec<BuiltinOp> = shape.alphabet.builtins().collect();
    let mut transitions = Vec::new();
    for _ in 0..rng.gen_range(1..=shape.max_lambdas.max(1) * n) {
        transitions.push(Transition::lambda(random_interval(rng, shape), state(rng.gen_range(0..n))));
    }
    for _ in 0..rng.gen_range(0..=shape.max_grounds) {
        let target = state(rng.gen_range(0..n));
        let (head, arity) = if !ops.is_empty() && rng.gen_bool(shape.builtin) {
            let op = *ops.choose(rng).expect("non-empty");
            (Head::Builtin(op), op.arity())
        } else if let Some((f, k)) = passive.choose(rng) {
            (Head::Passive(f.clone()), *k)
        } else {
            continue;
        };
        let args = (0..arity).map(|_| state(rng.gen_range(0..n))).collect();
        transitions.push(Transition::Ground { head, args, target });
    }
    for _ in 0..rng.gen_range(0..=shape.max_epsilons) {
        let (p, q) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if p != q {
            transitions.push(Transition::epsilon(state(p), state(q)));
        }
    }
    let mut finals: Vec<State> = (0..n).filter(|_| rng.gen_bool(0.4)).map(state).collect();
    if finals.is_empty() {
        finals.push(state(rng.gen_range(0..n)));
    }
    let mut a = Lta::build(shape.alphabet.clone(), transitions, finals).expect("generated transitions are valid");
    for i in 0..n {
        a.add_state(state(i));
    }
    a
}

/// Automata whose builtin transitions may form loops, for termination
/// tests of evaluation.
pub fn looping_automaton(rng: &mut impl Rng) -> Lta {
    let shape = AutomatonShape {
        alphabet: Alphabet::new([("f", 1)]).with_builtins([BuiltinOp::Add, BuiltinOp::Sub, BuiltinOp::Mul]),
        max_states: 4,
        max_lambdas: 2,
        max_grounds: 4,
        max_epsilons: 1,
        atom_lo: -10,
        atom_hi: 10,
        max_width: 5,
        unbounded: 0.05,
        builtin: 0.9,
    };
    let mut a = automaton(rng, &shape);
    // Make sure at least one operator feeds its own argument state.
    let q = state(rng.gen_range(0..a.states().len()));
    let p = a.states().iter().cloned().collect::<Vec<_>>().choose(rng).cloned().expect("states");
    let op = *[BuiltinOp::Add, BuiltinOp::Sub, BuiltinOp::Mul].choose(rng).expect("ops");
    a.add_transition(Transition::Ground { head: Head::Builtin(op), args: vec![q.clone(), p], target: q })
        .expect("valid loop");
    a
}

/// Shape of generated rewrite systems.
#[derive(Debug, Clone)]
pub struct TrsShape {
    pub max_rules: usize,
    pub max_conditions: usize,
    pub const_lo: i64,
    pub const_hi: i64,
}

impl Default for TrsShape {
    fn default() -> Self {
        TrsShape { max_rules: 3, max_conditions: 2, const_lo: -3, const_hi: 3 }
    }
}

fn random_lhs(rng: &mut impl Rng, symbols: &[(String, usize)], vars: &mut Vec<String>, depth: usize) -> Term {
    let heads: Vec<&(String, usize)> = symbols.iter().filter(|(_, k)| *k > 0 || depth > 0).collect();
    let (f, k) = heads.choose(rng).expect("symbols");
    let args = (0..*k)
        .map(|_| {
            let nested: Vec<&(String, usize)> = symbols.iter().filter(|(_, k)| *k > 0).collect();
            if depth == 0 && !nested.is_empty() && rng.gen_bool(0.25) {
                random_lhs(rng, symbols, vars, depth + 1)
            } else if depth == 0 && rng.gen_bool(0.1) {
                let c = symbols.iter().find(|(_, k)| *k == 0);
                match c {
                    Some((c, _)) => Term::constant(c.clone()),
                    None => fresh_var(vars),
                }
            } else {
                fresh_var(vars)
            }
        })
        .collect();
    Term::app(f.clone(), args)
}

fn fresh_var(vars: &mut Vec<String>) -> Term {
    let x = ["x", "y", "z", "u", "v", "w"].get(vars.len()).map(|s| s.to_string()).unwrap_or(format!("x{}", vars.len()));
    vars.push(x.clone());
    Term::var(x)
}

fn random_rhs(
    rng: &mut impl Rng,
    symbols: &[(String, usize)],
    ops: &[BuiltinOp],
    vars: &[String],
    shape: &TrsShape,
    depth: usize,
) -> Term {
    let leaf = |rng: &mut dyn rand::RngCore| {
        if !vars.is_empty() && rng.gen_bool(0.7) {
            Term::var(vars.choose(rng).expect("vars").clone())
        } else {
            Term::int(rng.gen_range(shape.const_lo..=shape.const_hi))
        }
    };
    if depth >= 2 || rng.gen_bool(0.3) {
        return leaf(rng);
    }
    if !ops.is_empty() && rng.gen_bool(0.4) {
        let op = *ops.choose(rng).expect("ops");
        let l = random_rhs(rng, symbols, ops, vars, shape, depth + 1);
        let r = random_rhs(rng, symbols, ops, vars, shape, depth + 1);
        return Term::op(op, l, r);
    }
    let (f, k) = symbols.choose(rng).expect("symbols");
    Term::app(f.clone(), (0..*k).map(|_| random_rhs(rng, symbols, ops, vars, shape, depth + 1)).collect())
}

fn random_condition(rng: &mut impl Rng, vars: &[String], shape: &TrsShape) -> Option<Predicate> {
    let x = vars.choose(rng)?.clone();
    let relation = *[Relation::Lt, Relation::Le, Relation::Gt, Relation::Ge, Relation::Eq, Relation::Ne]
        .choose(rng)
        .expect("relations");
    let bound = Term::int(rng.gen_range(2 * shape.const_lo..=2 * shape.const_hi));
    let lhs = match vars.choose(rng) {
        Some(y) if y != &x && rng.gen_bool(0.3) => Term::op(BuiltinOp::Add, Term::var(x), Term::var(y.clone())),
        _ => Term::var(x),
    };
    Some(Predicate::new(lhs, relation, bound))
}

/// A random left-linear conditional rewrite system over `alphabet`.
pub fn trs(rng: &mut impl Rng, alphabet: &Alphabet, shape: &TrsShape) -> Trs {
    let symbols: Vec<(String, usize)> = alphabet.passive().map(|(f, k)| (f.to_string(), k)).collect();
    let ops: Vec<BuiltinOp> = alphabet.builtins().filter(|o| matches!(o, BuiltinOp::Add | BuiltinOp::Sub)).collect();
    let mut rules = Vec::new();
    for _ in 0..rng.gen_range(1..=shape.max_rules) {
        let mut vars = Vec::new();
        let lhs = random_lhs(rng, &symbols, &mut vars, 0);
        let rhs = random_rhs(rng, &symbols, &ops, &vars, shape, 0);
        let conditions =
            (0..rng.gen_range(0..=shape.max_conditions)).filter_map(|_| random_condition(rng, &vars, shape)).collect();
        rules.push(RewriteRule::new(lhs, rhs, conditions).expect("generated rules are well formed"));
    }
    Trs { name: "random".into(), rules }
}

/// Random approximation equations: arithmetic ones `x = x + k` guarded by
/// a bound on `x`, and structural ones relating a pattern to a term over
/// its variables.
pub fn equations(rng: &mut impl Rng, alphabet: &Alphabet, max: usize) -> EquationSet {
    let symbols: Vec<(String, usize)> = alphabet.passive().map(|(f, k)| (f.to_string(), k)).collect();
    let mut out = Vec::new();
    for _ in 0..rng.gen_range(0..=max) {
        let eq = if symbols.iter().all(|(_, k)| *k == 0) || rng.gen_bool(0.5) {
            let x = || Term::var("x");
            let k = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let guard = Predicate::new(x(), Relation::Ge, Term::int(rng.gen_range(-5..=5)));
            Equation::new(x(), Term::op(BuiltinOp::Add, x(), Term::int(k)), vec![guard])
        } else {
            let mut vars = Vec::new();
            let lhs = random_lhs(rng, &symbols, &mut vars, 0);
            let rhs = random_rhs(rng, &symbols, &[], &vars, &TrsShape::default(), 0);
            Equation::new(lhs, rhs, Vec::new())
        };
        out.push(eq.expect("generated equations are well formed"));
    }
    EquationSet { name: "random".into(), equations: out }
}

/// A conjunction of linear comparisons with integer coefficients over a box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub vars: Vec<String>,
    /// `Σ coeffs[i]·vars[i] relation bound`.
    pub rows: Vec<(Vec<i64>, Relation, i64)>,
    /// Inclusive integer range of each variable.
    pub domain: Vec<(i64, i64)>,
}

impl LinearSystem {
    pub fn predicates(&self) -> Vec<Predicate> {
        self.rows
            .iter()
            .map(|(coeffs, rel, bound)| {
                let lhs = coeffs
                    .iter()
                    .zip(&self.vars)
                    .map(|(c, x)| Term::op(BuiltinOp::Mul, Term::int(*c), Term::var(x.clone())))
                    .reduce(|a, b| Term::op(BuiltinOp::Add, a, b))
                    .expect("at least one variable");
                Predicate::new(lhs, *rel, Term::int(*bound))
            })
            .collect()
    }

    pub fn input_box(&self) -> IntervalBox {
        self.vars.iter().cloned().zip(self.domain.iter().map(|&(lo, hi)| Interval::range(lo, hi))).collect()
    }

    fn holds(&self, point: &[i64]) -> bool {
        self.rows.iter().all(|(coeffs, rel, bound)| {
            let s: i64 = coeffs.iter().zip(point).map(|(c, v)| c * v).sum();
            match rel {
                Relation::Lt => s < *bound,
                Relation::Le => s <= *bound,
                Relation::Gt => s > *bound,
                Relation::Ge => s >= *bound,
                Relation::Eq => s == *bound,
                Relation::Ne => s != *bound,
            }
        })
    }

    /// Every integer point of the domain satisfying all rows.
    pub fn solutions(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut point: Vec<i64> = self.domain.iter().map(|d| d.0).collect();
        if self.domain.iter().any(|(lo, hi)| lo > hi) {
            return out;
        }
        loop {
            if self.holds(&point) {
                out.push(point.clone());
            }
            let mut i = 0;
            loop {
                if i == point.len() {
                    return out;
                }
                if point[i] < self.domain[i].1 {
                    point[i] += 1;
                    break;
                }
                point[i] = self.domain[i].0;
                i += 1;
            }
        }
    }
}

/// A random system over at most three variables with coefficients, bounds
/// and domains inside `[-range, range]`.
pub fn linear_system(rng: &mut impl Rng, range: i64) -> LinearSystem {
    let n = rng.gen_range(1..=3);
    let vars: Vec<String> = ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect();
    let relations = [Relation::Lt, Relation::Le, Relation::Gt, Relation::Ge, Relation::Eq, Relation::Ne];
    let rows = (0..rng.gen_range(1..=3))
        .map(|_| {
            let coeffs = (0..n).map(|_| rng.gen_range(-range..=range)).collect();
            (coeffs, *relations.choose(rng).expect("relations"), rng.gen_range(-range..=range))
        })
        .collect();
    let domain = (0..n)
        .map(|_| {
            let a = rng.gen_range(-range..=range);
            let b = rng.gen_range(-range..=range);
            (a.min(b), a.max(b))
        })
        .collect();
    LinearSystem { vars, rows, domain }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let shape = AutomatonShape::small();
        let a = automaton(&mut rng(7), &shape);
        let b = automaton(&mut rng(7), &shape);
        assert_eq!(a, b);
        let r1 = trs(&mut rng(9), &shape.alphabet, &TrsShape::default());
        let r2 = trs(&mut rng(9), &shape.alphabet, &TrsShape::default());
        assert_eq!(r1, r2);
        assert_eq!(linear_system(&mut rng(3), 20), linear_system(&mut rng(3), 20));
    }

    #[test]
    fn generated_automata_respect_shape() {
        let shape = AutomatonShape::small();
        let mut r = rng(1);
        for _ in 0..100 {
            let a = automaton(&mut r, &shape);
            assert!(a.states().len() <= shape.max_states);
            assert!(!a.finals().is_empty());
        }
    }

    #[test]
    fn generated_rules_are_left_linear() {
        let alphabet = AutomatonShape::small().alphabet;
        let mut r = rng(2);
        for _ in 0..200 {
            for rule in trs(&mut r, &alphabet, &TrsShape::default()).rules {
                assert!(rule.lhs.is_linear());
                assert!(rule.rhs.vars().is_subset(&rule.lhs.vars()));
            }
        }
    }

    #[test]
    fn solutions_enumerate_the_box() {
        let sys = LinearSystem {
            vars: vec!["x".into(), "y".into()],
            rows: vec![(vec![1, 1], Relation::Eq, 3)],
            domain: vec![(0, 3), (0, 3)],
        };
        assert_eq!(sys.solutions(), vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
    }
}
