//! The spec file format: lattice and symbol declarations, an optional
//! partition, named automata, rewrite systems, equation sets and a
//! completion config block.
//!
//! ```text
//! lattice interval-int
//! symbols { f:1 cons:2 nil:0 }
//! builtins { + - * }
//! automaton A0 {
//!   final q2
//!   [1,2] -> q1
//!   f(q1) -> q2
//! }
//! trs R { f(x) -> cons(x, f(x + 1)) <= x < 3 }
//! equations E { x = x + 2 <= x >= 5 }
//! config { widen-after 3 }
//! ```

mod lexer;
mod parser;
mod printer;

pub use parser::{parse_spec, parse_term};
pub use printer::{print_automaton, print_spec, print_standalone};

use lta_core::automaton::{AutomatonError, Lta};
use lta_core::completion::CompletionConfig;
use lta_core::lattice::Partition;
use lta_core::rewriting::{EquationSet, RuleError, Trs};
use lta_core::term::Alphabet;
use std::fmt;
use std::path::Path;
use thiserror::Error;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Loc {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("missing lattice declaration")]
    MissingLattice,
    #[error("unsupported lattice `{0}`")]
    UnknownLattice(String),
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` expects {expected} arguments, found {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("duplicate state `{name}`, first declared at {first}")]
    DuplicateState { name: String, first: Loc },
    #[error("state `{0}` is not declared")]
    UndeclaredState(String),
    #[error("duplicate declaration of `{name}`, first at {first}")]
    DuplicateName { name: String, first: Loc },
    #[error("unknown config key `{0}`")]
    UnknownConfigKey(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{loc}: {kind}")]
pub struct SyntaxError {
    pub loc: Loc,
    pub kind: SyntaxErrorKind,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{error}")]
    Syntax { path: String, error: SyntaxError },
}

/// Completion settings given in the file; unset keys keep their defaults.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigBlock {
    pub widen_after: Option<usize>,
    pub max_steps: Option<usize>,
    pub max_states: Option<usize>,
    pub strict_int: bool,
}

impl ConfigBlock {
    /// The completion config for this block with `equations`.
    pub fn completion(&self, equations: EquationSet) -> CompletionConfig {
        let d = CompletionConfig::default();
        CompletionConfig {
            max_steps: self.max_steps.unwrap_or(d.max_steps),
            widen_after: self.widen_after.unwrap_or(d.widen_after),
            equations,
            strict: if self.strict_int { lta_core::solver::StrictMode::StrictInt } else { d.strict },
            max_states: self.max_states,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecFile {
    pub lattice: String,
    pub alphabet: Alphabet,
    pub partition: Option<Partition>,
    /// In file order.
    pub automata: Vec<(String, Lta)>,
    pub trs: Vec<Trs>,
    pub equations: Vec<EquationSet>,
    pub config: ConfigBlock,
}

impl SpecFile {
    pub fn automaton(&self, name: &str) -> Option<&Lta> {
        self.automata.iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }

    pub fn first_automaton(&self) -> Option<(&str, &Lta)> {
        self.automata.first().map(|(n, a)| (n.as_str(), a))
    }
}

/// Reads and parses a spec file.
pub fn load_spec(path: impl AsRef<Path>) -> Result<SpecFile, LoadError> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let src = std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: shown.clone(), source })?;
    parse_spec(&src).map_err(|error| LoadError::Syntax { path: shown, error })
}
