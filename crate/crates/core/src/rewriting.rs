//! Conditional term rewriting over integers: predicates, rules, equations
//! and the concrete rewrite relation.

use crate::term::{Alphabet, Substitution, Term, TermError};
use num_bigint::BigInt;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Eq => "=",
            Relation::Ne => "!=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Some(match s {
            "<" => Relation::Lt,
            "<=" | "≤" => Relation::Le,
            ">" => Relation::Gt,
            ">=" | "≥" => Relation::Ge,
            "==" | "=" => Relation::Eq,
            "!=" | "≠" => Relation::Ne,
            _ => return None,
        })
    }

    pub fn holds(self, a: &BigInt, b: &BigInt) -> bool {
        match self {
            Relation::Lt => a < b,
            Relation::Le => a <= b,
            Relation::Gt => a > b,
            Relation::Ge => a >= b,
            Relation::Eq => a == b,
            Relation::Ne => a != b,
        }
    }
}

/// A comparison between two arithmetic terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Predicate {
    pub relation: Relation,
    pub lhs: Term,
    pub rhs: Term,
}

impl Predicate {
    pub fn new(lhs: Term, relation: Relation, rhs: Term) -> Self {
        Predicate { relation, lhs, rhs }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }

    /// Instantiates the predicate and compares both sides. A side that does
    /// not evaluate to an integer makes the predicate false.
    pub fn eval(&self, binding: &Substitution) -> bool {
        let side = |t: &Term| match t.substitute(binding).eval_concrete() {
            Ok(Term::Int(v)) => Some(v),
            _ => None,
        };
        match (side(&self.lhs), side(&self.rhs)) {
            (Some(a), Some(b)) => self.relation.holds(&a, &b),
            _ => false,
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.relation.symbol(), self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("left-hand side of a rule cannot be a variable")]
    VariableLhs,
    #[error("left-hand side must be built from passive symbols and variables, found `{0}`")]
    InterpretedLhs(String),
    #[error("variable `{0}` occurs more than once in the left-hand side")]
    NotLeftLinear(String),
    #[error("variable `{0}` is not bound by the left-hand side")]
    UnboundVariable(String),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// `lhs -> rhs <= c1, ..., cn`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RewriteRule {
    pub lhs: Term,
    pub rhs: Term,
    pub conditions: Vec<Predicate>,
}

impl RewriteRule {
    /// Validates left-linearity, the shape of the left-hand side and that
    /// every variable of the right-hand side and conditions is bound.
    pub fn new(lhs: Term, rhs: Term, conditions: Vec<Predicate>) -> Result<Self, RuleError> {
        if matches!(lhs, Term::Var(_)) {
            return Err(RuleError::VariableLhs);
        }
        check_passive_pattern(&lhs)?;
        let mut seen = BTreeSet::new();
        check_linear(&lhs, &mut seen)?;
        let bound = lhs.vars();
        let mut used = rhs.vars();
        for c in &conditions {
            used.extend(c.vars());
        }
        if let Some(x) = used.difference(&bound).next() {
            return Err(RuleError::UnboundVariable(x.clone()));
        }
        Ok(RewriteRule { lhs, rhs, conditions })
    }

    pub fn validate(&self, alphabet: &Alphabet) -> Result<(), RuleError> {
        self.lhs.validate(alphabet)?;
        self.rhs.validate(alphabet)?;
        Ok(())
    }

    pub fn conditions_hold(&self, sigma: &Substitution) -> bool {
        self.conditions.iter().all(|c| c.eval(sigma))
    }

    /// Variables that appear in some condition.
    pub fn constrained_vars(&self) -> BTreeSet<String> {
        self.conditions.iter().flat_map(Predicate::vars).collect()
    }
}

fn check_passive_pattern(t: &Term) -> Result<(), RuleError> {
    match t {
        Term::Var(_) => Ok(()),
        Term::App { args, .. } => args.iter().try_for_each(check_passive_pattern),
        other => Err(RuleError::InterpretedLhs(other.to_string())),
    }
}

fn check_linear(t: &Term, seen: &mut BTreeSet<String>) -> Result<(), RuleError> {
    match t {
        Term::Var(x) if !seen.insert(x.clone()) => Err(RuleError::NotLeftLinear(x.clone())),
        _ => t.children().iter().try_for_each(|c| check_linear(c, seen)),
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)?;
        write_conditions(f, &self.conditions)
    }
}

fn write_conditions(f: &mut fmt::Formatter<'_>, conditions: &[Predicate]) -> fmt::Result {
    for (i, c) in conditions.iter().enumerate() {
        f.write_str(if i == 0 { " <= " } else { ", " })?;
        write!(f, "{c}")?;
    }
    Ok(())
}

/// `lhs = rhs <= c1, ..., cn`: terms recognised by the two sides may be
/// identified when the conditions hold.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    pub conditions: Vec<Predicate>,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term, conditions: Vec<Predicate>) -> Result<Self, RuleError> {
        let mut bound = lhs.vars();
        bound.extend(rhs.vars());
        for c in &conditions {
            if let Some(x) = c.vars().difference(&bound).next() {
                return Err(RuleError::UnboundVariable(x.clone()));
            }
        }
        Ok(Equation { lhs, rhs, conditions })
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)?;
        write_conditions(f, &self.conditions)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trs {
    pub name: String,
    pub rules: Vec<RewriteRule>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EquationSet {
    pub name: String,
    pub equations: Vec<Equation>,
}

/// Syntactic matching of a passive pattern against a ground term.
pub fn match_pattern(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    match_into(pattern, subject, &mut sigma).then_some(sigma)
}

fn match_into(pattern: &Term, subject: &Term, sigma: &mut Substitution) -> bool {
    match (pattern, subject) {
        (Term::Var(x), _) => match sigma.get(x) {
            Some(bound) => bound == subject,
            None => {
                sigma.insert(x.clone(), subject.clone());
                true
            }
        },
        (Term::App { head: f, args: xs }, Term::App { head: g, args: ys }) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_into(x, y, sigma))
        }
        _ => pattern == subject,
    }
}

impl Trs {
    /// All one-step successors of a ground term, each evaluated.
    pub fn rewrite_step(&self, s: &Term) -> Result<BTreeSet<Term>, TermError> {
        let mut out = BTreeSet::new();
        for pos in s.positions() {
            let sub = s.subterm_at(&pos)?;
            for rule in &self.rules {
                let Some(sigma) = match_pattern(&rule.lhs, sub) else { continue };
                if !rule.conditions_hold(&sigma) {
                    continue;
                }
                let replaced = s.replace_at(&pos, rule.rhs.substitute(&sigma))?;
                out.insert(replaced.eval_concrete()?);
            }
        }
        Ok(out)
    }

    /// Breadth-first closure of `seeds` under rewriting, `max_steps` deep.
    /// Terms larger than `max_size` are dropped and flag truncation.
    pub fn reachable(
        &self,
        seeds: impl IntoIterator<Item = Term>,
        max_steps: usize,
        max_size: usize,
    ) -> Result<Reachable, TermError> {
        let mut terms = BTreeSet::new();
        let mut truncated = false;
        let mut queue = VecDeque::new();
        for s in seeds {
            let s = s.eval_concrete()?;
            if terms.insert(s.clone()) {
                queue.push_back((s, 0));
            }
        }
        while let Some((t, depth)) = queue.pop_front() {
            let next = self.rewrite_step(&t)?;
            if depth == max_steps {
                truncated |= next.iter().any(|n| !terms.contains(n));
                continue;
            }
            for n in next {
                if n.size() > max_size {
                    truncated = true;
                } else if terms.insert(n.clone()) {
                    queue.push_back((n, depth + 1));
                }
            }
        }
        Ok(Reachable { terms, truncated })
    }

    /// Rewrites the leftmost-outermost redex until none remains, counting
    /// steps. Stops after `max_steps`.
    pub fn normalize(&self, t: &Term, max_steps: usize) -> Result<(Term, usize), TermError> {
        let mut cur = t.eval_concrete()?;
        for steps in 0..max_steps {
            match self.outermost_step(&cur) {
                Some(next) => cur = next.eval_concrete()?,
                None => return Ok((cur, steps)),
            }
        }
        Ok((cur, max_steps))
    }

    fn outermost_step(&self, t: &Term) -> Option<Term> {
        for rule in &self.rules {
            if let Some(sigma) = match_pattern(&rule.lhs, t) {
                if rule.conditions_hold(&sigma) {
                    return Some(rule.rhs.substitute(&sigma));
                }
            }
        }
        t.children().iter().enumerate().find_map(|(i, a)| {
            let next = self.outermost_step(a)?;
            let mut t = t.clone();
            match &mut t {
                Term::App { args, .. } | Term::Op { args, .. } => args[i] = next,
                _ => unreachable!("only applications have children"),
            }
            Some(t)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reachable {
    pub terms: BTreeSet<Term>,
    pub truncated: bool,
}
