//! Terms over passive symbols, built-in operators, integer and interval
//! constants, variables and automaton states.

use crate::automaton::State;
use crate::lattice::{AtomicLattice, Interval, Lattice};
use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Interpreted binary operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BuiltinOp {
    Add,
    Sub,
    Mul,
    Lub,
    Glb,
}

impl BuiltinOp {
    pub const ALL: [BuiltinOp; 5] = [BuiltinOp::Add, BuiltinOp::Sub, BuiltinOp::Mul, BuiltinOp::Lub, BuiltinOp::Glb];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinOp::Add => "+",
            BuiltinOp::Sub => "-",
            BuiltinOp::Mul => "*",
            BuiltinOp::Lub => "lub",
            BuiltinOp::Glb => "glb",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        BuiltinOp::ALL.into_iter().find(|op| op.name() == name)
    }

    pub fn arity(self) -> usize {
        2
    }

    pub fn is_infix(self) -> bool {
        matches!(self, BuiltinOp::Add | BuiltinOp::Sub | BuiltinOp::Mul)
    }

    /// Concrete semantics; join and meet have none on plain integers.
    pub fn apply_concrete(self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        match self {
            BuiltinOp::Add => Some(a + b),
            BuiltinOp::Sub => Some(a - b),
            BuiltinOp::Mul => Some(a * b),
            BuiltinOp::Lub | BuiltinOp::Glb => None,
        }
    }

    pub fn apply_abstract(self, a: &Interval, b: &Interval) -> Interval {
        Interval::apply_op(self.name(), &[a.clone(), b.clone()]).expect("interval table covers every builtin")
    }
}

impl fmt::Display for BuiltinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Passive symbols with their arities, plus the enabled built-in operators.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alphabet {
    passive: BTreeMap<String, usize>,
    builtins: BTreeSet<BuiltinOp>,
}

impl Alphabet {
    /// An alphabet with every built-in operator enabled.
    pub fn new<'a>(passive: impl IntoIterator<Item = (&'a str, usize)>) -> Self {
        Alphabet {
            passive: passive.into_iter().map(|(n, a)| (n.to_string(), a)).collect(),
            builtins: BuiltinOp::ALL.into_iter().collect(),
        }
    }

    /// Enables exactly the operators in `ops`.
    pub fn with_builtins(mut self, ops: impl IntoIterator<Item = BuiltinOp>) -> Self {
        self.builtins = ops.into_iter().collect();
        self
    }

    pub fn add_builtin(&mut self, op: BuiltinOp) {
        self.builtins.insert(op);
    }

    pub fn add_passive(&mut self, name: &str, arity: usize) {
        self.passive.insert(name.to_string(), arity);
    }

    pub fn passive_arity(&self, name: &str) -> Option<usize> {
        self.passive.get(name).copied()
    }

    pub fn passive(&self) -> impl Iterator<Item = (&str, usize)> {
        self.passive.iter().map(|(n, a)| (n.as_str(), *a))
    }

    pub fn builtins(&self) -> impl Iterator<Item = BuiltinOp> + '_ {
        self.builtins.iter().copied()
    }

    pub fn has_builtin(&self, op: BuiltinOp) -> bool {
        self.builtins.contains(&op)
    }

    /// Symbols and builtins of both alphabets. Conflicting arities keep `self`'s.
    pub fn merged(&self, other: &Alphabet) -> Alphabet {
        let mut out = self.clone();
        for (n, a) in &other.passive {
            out.passive.entry(n.clone()).or_insert(*a);
        }
        out.builtins.extend(other.builtins.iter().copied());
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("position {0} does not exist in the term")]
    InvalidPosition(Position),
    #[error("term mixes integer constants and lattice values")]
    MixedConstants,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` expects {expected} arguments, found {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("operator `{0}` has no concrete semantics on integers")]
    NoConcreteSemantics(BuiltinOp),
    #[error("expected a ground term, found variable `{0}`")]
    NotGround(String),
}

/// A term. Passive applications with no arguments are constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    App { head: String, args: Vec<Term> },
    Op { op: BuiltinOp, args: Vec<Term> },
    Int(BigInt),
    Val(Interval),
    Var(String),
    State(State),
}

/// A path of 1-based child indices; the empty path is the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Position(pub Vec<usize>);

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

/// Variable bindings to terms (states, values or ground terms).
pub type Substitution = BTreeMap<String, Term>;

impl Term {
    pub fn app(head: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App { head: head.into(), args }
    }

    pub fn constant(head: impl Into<String>) -> Term {
        Term::App { head: head.into(), args: Vec::new() }
    }

    pub fn op(op: BuiltinOp, lhs: Term, rhs: Term) -> Term {
        Term::Op { op, args: vec![lhs, rhs] }
    }

    pub fn int(v: impl Into<BigInt>) -> Term {
        Term::Int(v.into())
    }

    pub fn val(v: Interval) -> Term {
        Term::Val(v)
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn state(q: impl Into<State>) -> Term {
        Term::State(q.into())
    }

    pub fn children(&self) -> &[Term] {
        match self {
            Term::App { args, .. } | Term::Op { args, .. } => args,
            _ => &[],
        }
    }

    fn children_mut(&mut self) -> Option<&mut Vec<Term>> {
        match self {
            Term::App { args, .. } | Term::Op { args, .. } => Some(args),
            _ => None,
        }
    }

    /// Checks arities and symbols against `alphabet`, and rejects terms that
    /// contain both integer constants and lattice values.
    pub fn validate(&self, alphabet: &Alphabet) -> Result<(), TermError> {
        let (mut ints, mut vals) = (false, false);
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                Term::App { head, args } => {
                    let expected =
                        alphabet.passive_arity(head).ok_or_else(|| TermError::UnknownSymbol(head.clone()))?;
                    if expected != args.len() {
                        return Err(TermError::ArityMismatch { symbol: head.clone(), expected, found: args.len() });
                    }
                }
                Term::Op { op, args } => {
                    if !alphabet.has_builtin(*op) {
                        return Err(TermError::UnknownSymbol(op.name().to_string()));
                    }
                    if args.len() != op.arity() {
                        return Err(TermError::ArityMismatch {
                            symbol: op.name().to_string(),
                            expected: op.arity(),
                            found: args.len(),
                        });
                    }
                }
                Term::Int(_) => ints = true,
                Term::Val(_) => vals = true,
                Term::Var(_) | Term::State(_) => {}
            }
            stack.extend(t.children());
        }
        if ints && vals {
            return Err(TermError::MixedConstants);
        }
        Ok(())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            _ => self.children().iter().all(Term::is_ground),
        }
    }

    /// Built only from constants and operators, so it evaluates to a value.
    pub fn is_interpreted(&self) -> bool {
        match self {
            Term::Int(_) | Term::Val(_) => true,
            Term::Op { args, .. } => args.iter().all(Term::is_interpreted),
            _ => false,
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            _ => self.children().iter().for_each(|c| c.collect_vars(out)),
        }
    }

    /// Whether some variable occurs twice.
    pub fn is_linear(&self) -> bool {
        fn walk(t: &Term, seen: &mut BTreeSet<String>) -> bool {
            match t {
                Term::Var(x) => seen.insert(x.clone()),
                _ => t.children().iter().all(|c| walk(c, seen)),
            }
        }
        walk(self, &mut BTreeSet::new())
    }

    /// All positions, in pre-order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut out);
        out
    }

    fn collect_positions(&self, path: &mut Vec<usize>, out: &mut Vec<Position>) {
        out.push(Position(path.clone()));
        for (i, c) in self.children().iter().enumerate() {
            path.push(i + 1);
            c.collect_positions(path, out);
            path.pop();
        }
    }

    pub fn subterm_at(&self, pos: &Position) -> Result<&Term, TermError> {
        let mut t = self;
        for &i in &pos.0 {
            t = i
                .checked_sub(1)
                .and_then(|i| t.children().get(i))
                .ok_or_else(|| TermError::InvalidPosition(pos.clone()))?;
        }
        Ok(t)
    }

    pub fn replace_at(&self, pos: &Position, replacement: Term) -> Result<Term, TermError> {
        let mut out = self.clone();
        let mut t = &mut out;
        for &i in &pos.0 {
            let children = t.children_mut().ok_or_else(|| TermError::InvalidPosition(pos.clone()))?;
            t = i
                .checked_sub(1)
                .and_then(|i| children.get_mut(i))
                .ok_or_else(|| TermError::InvalidPosition(pos.clone()))?;
        }
        *t = replacement;
        Ok(out)
    }

    /// Replaces every bound variable; unbound ones stay.
    pub fn substitute(&self, sigma: &Substitution) -> Term {
        match self {
            Term::Var(x) => sigma.get(x).cloned().unwrap_or_else(|| self.clone()),
            Term::App { head, args } => {
                Term::App { head: head.clone(), args: args.iter().map(|a| a.substitute(sigma)).collect() }
            }
            Term::Op { op, args } => Term::Op { op: *op, args: args.iter().map(|a| a.substitute(sigma)).collect() },
            _ => self.clone(),
        }
    }

    /// Replaces every integer constant by its abstraction.
    pub fn abstracted(&self) -> Term {
        match self {
            Term::Int(k) => Term::Val(Interval::alpha(k)),
            Term::App { head, args } => {
                Term::App { head: head.clone(), args: args.iter().map(Term::abstracted).collect() }
            }
            Term::Op { op, args } => Term::Op { op: *op, args: args.iter().map(Term::abstracted).collect() },
            _ => self.clone(),
        }
    }

    /// Innermost evaluation over integers: every operator whose arguments
    /// evaluate to integers is replaced by its result.
    pub fn eval_concrete(&self) -> Result<Term, TermError> {
        match self {
            Term::Val(_) => Err(TermError::MixedConstants),
            Term::Var(x) => Err(TermError::NotGround(x.clone())),
            Term::App { head, args } => Ok(Term::App {
                head: head.clone(),
                args: args.iter().map(Term::eval_concrete).collect::<Result<_, _>>()?,
            }),
            Term::Op { op, args } => {
                let args: Vec<Term> = args.iter().map(Term::eval_concrete).collect::<Result<_, _>>()?;
                if let [Term::Int(a), Term::Int(b)] = args.as_slice() {
                    return op.apply_concrete(a, b).map(Term::Int).ok_or(TermError::NoConcreteSemantics(*op));
                }
                Ok(Term::Op { op: *op, args })
            }
            Term::Int(_) | Term::State(_) => Ok(self.clone()),
        }
    }

    /// Innermost evaluation over intervals; integer constants are abstracted
    /// on the fly and bottom propagates through every operator.
    pub fn eval_abstract(&self) -> Term {
        match self {
            Term::Int(k) => Term::Val(Interval::alpha(k)),
            Term::App { head, args } => {
                Term::App { head: head.clone(), args: args.iter().map(Term::eval_abstract).collect() }
            }
            Term::Op { op, args } => {
                let args: Vec<Term> = args.iter().map(Term::eval_abstract).collect();
                if let [Term::Val(a), Term::Val(b)] = args.as_slice() {
                    return Term::Val(op.apply_abstract(a, b));
                }
                Term::Op { op: *op, args }
            }
            _ => self.clone(),
        }
    }

    /// The value of an interpreted term, if it is one.
    pub fn abstract_value(&self) -> Option<Interval> {
        match self.eval_abstract() {
            Term::Val(v) if self.is_interpreted() => Some(v),
            _ => None,
        }
    }

    /// Ordering on terms: both sides are evaluated, then lattice leaves are
    /// compared by the lattice order and everything else structurally.
    pub fn leq(&self, other: &Term) -> bool {
        fn walk(s: &Term, t: &Term) -> bool {
            match (s, t) {
                (Term::Val(a), Term::Val(b)) => a.leq(b),
                (Term::App { head: f, args: xs }, Term::App { head: g, args: ys }) => {
                    f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| walk(x, y))
                }
                (Term::Op { op: f, args: xs }, Term::Op { op: g, args: ys }) => {
                    f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| walk(x, y))
                }
                _ => s == t,
            }
        }
        walk(&self.eval_abstract(), &other.eval_abstract())
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Term::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(Term::depth).max().unwrap_or(0)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::App { head, args } if args.is_empty() => f.write_str(head),
            Term::App { head, args } => {
                write!(f, "{head}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
            Term::Op { op, args } if op.is_infix() && args.len() == 2 => {
                write_operand(f, &args[0], false)?;
                write!(f, " {op} ")?;
                write_operand(f, &args[1], true)
            }
            Term::Op { op, args } => {
                write!(f, "{op}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
            Term::Int(k) => write!(f, "{k}"),
            Term::Val(v) => write!(f, "{v}"),
            Term::Var(x) => f.write_str(x),
            Term::State(q) => write!(f, "{q}"),
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

/// Infix operands are parenthesised when they are infix themselves, except
/// on the left, where left associativity makes it unnecessary.
fn write_operand(f: &mut fmt::Formatter<'_>, t: &Term, right: bool) -> fmt::Result {
    match t {
        Term::Op { op, .. } if op.is_infix() && (right || *op == BuiltinOp::Mul) => write!(f, "({t})"),
        _ => write!(f, "{t}"),
    }
}
