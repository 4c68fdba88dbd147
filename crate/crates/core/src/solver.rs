//! Interval constraint solving for rule conditions.
//!
//! Conditions are linear comparisons. Each system is intersected with a box
//! of input intervals and projected onto every variable by Fourier-Motzkin
//! elimination over the rationals; the projection is then rounded inwards to
//! integer bounds.

use crate::automaton::{Lta, Runner, State};
use crate::lattice::{Bound, Interval, Lattice};
use crate::rewriting::{Predicate, Relation};
use crate::term::{BuiltinOp, Term};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("condition `{0}` is not linear")]
    NonLinearConstraint(String),
}

/// How strict comparisons are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StrictMode {
    /// `e < b` is relaxed to `e <= b`.
    #[default]
    Relaxed,
    /// `e < b` becomes `e <= b - 1`, exact over integers.
    StrictInt,
}

/// `constant + Σ coeff·var`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearExpr {
    pub coeffs: BTreeMap<String, BigRational>,
    pub constant: BigRational,
}

impl LinearExpr {
    fn constant(c: BigRational) -> Self {
        LinearExpr { coeffs: BTreeMap::new(), constant: c }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn scaled(&self, k: &BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !k.is_zero() {
            for (x, a) in &self.coeffs {
                coeffs.insert(x.clone(), a * k);
            }
        }
        LinearExpr { coeffs, constant: &self.constant * k }
    }

    fn plus(&self, other: &LinearExpr) -> Self {
        let mut out = self.clone();
        for (x, a) in &other.coeffs {
            let e = out.coeffs.entry(x.clone()).or_insert_with(BigRational::zero);
            *e += a;
            if e.is_zero() {
                out.coeffs.remove(x);
            }
        }
        out.constant += &other.constant;
        out
    }

    pub fn from_term(t: &Term) -> Option<LinearExpr> {
        match t {
            Term::Var(x) => Some(LinearExpr {
                coeffs: BTreeMap::from([(x.clone(), BigRational::one())]),
                constant: BigRational::zero(),
            }),
            Term::Int(k) => Some(LinearExpr::constant(BigRational::from_integer(k.clone()))),
            Term::Op { op, args } if args.len() == 2 => {
                let a = LinearExpr::from_term(&args[0])?;
                let b = LinearExpr::from_term(&args[1])?;
                match op {
                    BuiltinOp::Add => Some(a.plus(&b)),
                    BuiltinOp::Sub => Some(a.plus(&b.scaled(&-BigRational::one()))),
                    BuiltinOp::Mul if a.is_constant() => Some(b.scaled(&a.constant)),
                    BuiltinOp::Mul if b.is_constant() => Some(a.scaled(&b.constant)),
                    _ => None,
                }
            }
            _ => None,
        }
    }
}

/// `Σ coeff·var <= bound`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Constraint {
    coeffs: BTreeMap<String, BigRational>,
    bound: BigRational,
}

impl Constraint {
    /// Scales so the first coefficient has absolute value one, making
    /// duplicates syntactically equal.
    fn normalized(mut self) -> Self {
        if let Some(a) = self.coeffs.values().next().map(|a| a.abs()) {
            for c in self.coeffs.values_mut() {
                *c /= &a;
            }
            self.bound /= &a;
        }
        self
    }
}

/// A conjunction of linear constraints.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstraintSystem {
    constraints: Vec<Constraint>,
    vars: BTreeSet<String>,
}

/// Variable bindings to intervals.
pub type IntervalBox = BTreeMap<String, Interval>;

impl ConstraintSystem {
    /// Linearises the predicates. `!=` carries no convex information and
    /// is dropped, which only loses precision.
    pub fn from_predicates(preds: &[Predicate], mode: StrictMode) -> Result<Self, SolverError> {
        let mut sys = ConstraintSystem::default();
        for p in preds {
            let nonlinear = || SolverError::NonLinearConstraint(p.to_string());
            let l = LinearExpr::from_term(&p.lhs).ok_or_else(nonlinear)?;
            let r = LinearExpr::from_term(&p.rhs).ok_or_else(nonlinear)?;
            sys.vars.extend(l.coeffs.keys().cloned());
            sys.vars.extend(r.coeffs.keys().cloned());
            // diff = lhs - rhs; every relation becomes diff ⋈ 0.
            let diff = l.plus(&r.scaled(&-BigRational::one()));
            let neg = diff.scaled(&-BigRational::one());
            match p.relation {
                Relation::Le => sys.push_le(&diff, false, mode),
                Relation::Lt => sys.push_le(&diff, true, mode),
                Relation::Ge => sys.push_le(&neg, false, mode),
                Relation::Gt => sys.push_le(&neg, true, mode),
                Relation::Eq => {
                    sys.push_le(&diff, false, mode);
                    sys.push_le(&neg, false, mode);
                }
                Relation::Ne => {}
            }
        }
        Ok(sys)
    }

    /// Adds `e <= 0`, or `e < 0` when `strict`.
    fn push_le(&mut self, e: &LinearExpr, strict: bool, mode: StrictMode) {
        let mut bound = -e.constant.clone();
        if strict && mode == StrictMode::StrictInt && e.coeffs.values().all(|a| a.is_integer()) {
            // Integer-valued left side: e < b iff e <= ceil(b) - 1.
            bound = bound.ceil() - BigRational::one();
        }
        self.constraints.push(Constraint { coeffs: e.coeffs.clone(), bound });
    }

    pub fn vars(&self) -> &BTreeSet<String> {
        &self.vars
    }

    pub fn is_trivial(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Restricts `input` to the constraints. Returns `None` when no integer
    /// point of the box satisfies the relaxed system. Variables absent from
    /// `input` range over all integers; those without constraints keep
    /// their input value.
    pub fn solve_box(&self, input: &IntervalBox) -> Option<IntervalBox> {
        let mut base = self.constraints.clone();
        for x in &self.vars {
            let v = input.get(x).cloned().unwrap_or_else(Interval::top);
            let (lo, hi) = v.bounds()?;
            if let Bound::Int(lo) = lo {
                base.push(Constraint {
                    coeffs: BTreeMap::from([(x.clone(), -BigRational::one())]),
                    bound: -BigRational::from_integer(lo.clone()),
                });
            }
            if let Bound::Int(hi) = hi {
                base.push(Constraint {
                    coeffs: BTreeMap::from([(x.clone(), BigRational::one())]),
                    bound: BigRational::from_integer(hi.clone()),
                });
            }
        }
        let mut out = input.clone();
        for x in &self.vars {
            let others: Vec<&String> = self.vars.iter().filter(|y| *y != x).collect();
            let projected = eliminate(base.clone(), &others)?;
            let v = hull(x, &projected)?;
            out.insert(x.clone(), v);
        }
        Some(out)
    }

    pub fn satisfiable(&self, input: &IntervalBox) -> bool {
        self.solve_box(input).is_some()
    }
}

/// Fourier-Motzkin elimination of `vars`. `None` when a contradiction
/// between constants shows up.
fn eliminate(mut cs: Vec<Constraint>, vars: &[&String]) -> Option<Vec<Constraint>> {
    for x in vars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in cs {
            match c.coeffs.get(*x).map(|a| a.is_positive()) {
                Some(true) => pos.push(c),
                Some(false) => neg.push(c),
                None => rest.push(c),
            }
        }
        for p in &pos {
            for n in &neg {
                let ap = p.coeffs[*x].clone();
                let an = -n.coeffs[*x].clone();
                let mut coeffs: BTreeMap<String, BigRational> = BTreeMap::new();
                for (y, a) in &p.coeffs {
                    *coeffs.entry(y.clone()).or_insert_with(BigRational::zero) += a / &ap;
                }
                for (y, a) in &n.coeffs {
                    *coeffs.entry(y.clone()).or_insert_with(BigRational::zero) += a / &an;
                }
                coeffs.retain(|_, a| !a.is_zero());
                rest.push(Constraint { coeffs, bound: &p.bound / &ap + &n.bound / &an });
            }
        }
        let mut seen = BTreeSet::new();
        cs = Vec::new();
        for c in rest {
            if c.coeffs.is_empty() {
                if c.bound.is_negative() {
                    return None;
                }
                continue;
            }
            let c = c.normalized();
            if seen.insert(c.clone()) {
                cs.push(c);
            }
        }
    }
    for c in &cs {
        if c.coeffs.is_empty() && c.bound.is_negative() {
            return None;
        }
    }
    Some(cs)
}

/// Integer hull of the one-variable constraints on `x`.
fn hull(x: &str, cs: &[Constraint]) -> Option<Interval> {
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for c in cs {
        let Some(a) = c.coeffs.get(x) else { continue };
        let v = &c.bound / a;
        if a.is_positive() {
            hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
        } else {
            lo = Some(lo.map_or(v.clone(), |l| l.max(v)));
        }
    }
    let lo = lo.map_or(Bound::NegInf, |l| Bound::Int(ceil(&l)));
    let hi = hi.map_or(Bound::PosInf, |h| Bound::Int(floor(&h)));
    let v = Interval::new(lo, hi);
    (!v.is_bottom()).then_some(v)
}

fn ceil(r: &BigRational) -> BigInt {
    r.ceil().to_integer()
}

fn floor(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

/// A variable bound either to a state or to a solved interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Binding {
    State(State),
    Value(Interval),
}

/// Solves `system` for every tuple of lambda values reaching the states
/// bound to its variables. Variables outside the system keep their state.
pub fn solve(
    sigma: &BTreeMap<String, State>,
    a: &Lta,
    system: &ConstraintSystem,
) -> BTreeSet<BTreeMap<String, Binding>> {
    solve_with(&a.runner(), sigma, system)
}

/// [`solve`] against a prepared runner.
pub fn solve_with(
    runner: &Runner<'_>,
    sigma: &BTreeMap<String, State>,
    system: &ConstraintSystem,
) -> BTreeSet<BTreeMap<String, Binding>> {
    let constrained: Vec<&String> = system.vars().iter().collect();
    let mut choices: Vec<Vec<Interval>> = Vec::new();
    for x in &constrained {
        let Some(q) = sigma.get(*x) else { return BTreeSet::new() };
        choices.push(runner.values_into(q).into_iter().collect());
    }
    let mut out = BTreeSet::new();
    for tuple in crate::automaton::tuples_of_choices(&choices) {
        let input: IntervalBox = constrained.iter().map(|x| (*x).clone()).zip(tuple).collect();
        if let Some(solved) = system.solve_box(&input) {
            let mut binding: BTreeMap<String, Binding> =
                sigma.iter().map(|(x, q)| (x.clone(), Binding::State(q.clone()))).collect();
            for (x, v) in solved {
                binding.insert(x, Binding::Value(v));
            }
            out.insert(binding);
        }
    }
    out
}
