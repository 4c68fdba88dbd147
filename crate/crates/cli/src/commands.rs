//! Subcommand implementations. Each returns the text for standard output
//! and an exit code; failures are [`CommandError`]s.

use crate::syntax::{load_spec, parse_term, print_standalone, LoadError, SpecFile, SyntaxError};
use lta_core::automaton::{AutomatonError, Lta};
use lta_core::completion::{check_reachability, complete, CompletionConfig, CompletionError, Verdict};
use lta_core::lattice::Partition;
use lta_core::oracle::peano_benchmark;
use lta_core::partitioned::{determinize_report, minimize, PartitionedError, Plta};
use lta_core::rewriting::{EquationSet, Trs};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("term: {0}")]
    Term(SyntaxError),
    #[error("{path} declares no {what}{}", name.as_ref().map(|n| format!(" named `{n}`")).unwrap_or_default())]
    Missing { path: String, what: &'static str, name: Option<String> },
    #[error("{path} declares no partition")]
    NoPartition { path: String },
    #[error(transparent)]
    Completion(#[from] CompletionError),
    #[error(transparent)]
    Partitioned(#[from] PartitionedError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("symbol `{symbol}` has arity {left} on the left and {right} on the right")]
    ArityConflict { symbol: String, left: usize, right: usize },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
}

/// Exit code of a negative answer: not a member, not included, or an
/// inconclusive reachability check.
pub const NEGATIVE: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    /// Extra lines for standard error.
    pub stderr: String,
    pub code: u8,
}

impl Output {
    fn text(stdout: String) -> Self {
        Output { stdout, stderr: String::new(), code: 0 }
    }
}

type Result<T> = std::result::Result<T, CommandError>;

fn shown(path: &Path) -> String {
    path.display().to_string()
}

/// Loads an automaton from a spec file: the one called `name`, or the
/// first one.
pub fn load_automaton(path: &Path, name: Option<&str>) -> Result<(SpecFile, String, Lta)> {
    let spec = load_spec(path)?;
    let found = match name {
        Some(n) => spec.automaton(n).map(|a| (n.to_string(), a.clone())),
        None => spec.first_automaton().map(|(n, a)| (n.to_string(), a.clone())),
    };
    let (n, a) = found.ok_or_else(|| CommandError::Missing {
        path: shown(path),
        what: "automaton",
        name: name.map(String::from),
    })?;
    Ok((spec, n, a))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| CommandError::Write { path: shown(path), source })
}

/// Options shared by `complete` and `check`.
#[derive(Debug, Clone, Default)]
pub struct CompletionArgs {
    pub automaton: Option<String>,
    pub trs: Option<String>,
    pub equations: Option<String>,
    pub max_steps: Option<usize>,
    pub widen_after: Option<usize>,
    pub strict_int: bool,
}

fn completion_inputs(path: &Path, args: &CompletionArgs) -> Result<(SpecFile, Lta, Trs, CompletionConfig)> {
    let (spec, _, a) = load_automaton(path, args.automaton.as_deref())?;
    let pick = |what: &'static str, name: &Option<String>| CommandError::Missing {
        path: shown(path),
        what,
        name: name.clone(),
    };
    let trs = match &args.trs {
        Some(n) => spec.trs.iter().find(|t| &t.name == n).cloned().ok_or_else(|| pick("trs", &args.trs))?,
        None => spec.trs.first().cloned().unwrap_or_default(),
    };
    let equations = match &args.equations {
        Some(n) => spec
            .equations
            .iter()
            .find(|e| &e.name == n)
            .cloned()
            .ok_or_else(|| pick("equation set", &args.equations))?,
        None => spec.equations.first().cloned().unwrap_or_else(EquationSet::default),
    };
    let mut block = spec.config.clone();
    block.max_steps = args.max_steps.or(block.max_steps);
    block.widen_after = args.widen_after.or(block.widen_after);
    block.strict_int |= args.strict_int;
    let cfg = block.completion(equations);
    Ok((spec, a, trs, cfg))
}

pub fn complete_cmd(
    path: &Path,
    args: &CompletionArgs,
    trace: Option<&PathBuf>,
    out: Option<&PathBuf>,
) -> Result<Output> {
    let (spec, a, trs, cfg) = completion_inputs(path, args)?;
    let done = complete(&a, &trs, &cfg)?;
    if let Some(t) = trace {
        write_file(t, &done.trace_text())?;
    }
    let text = print_standalone("completed", &done.automaton, spec.partition.as_ref());
    let summary = format!(
        "{} after {} step(s): {} states, {} transitions\n",
        if done.converged { "converged" } else { "not converged" },
        done.steps,
        done.automaton.states().len(),
        done.automaton.transitions().len()
    );
    let stdout = match out {
        Some(o) => {
            write_file(o, &text)?;
            summary.clone()
        }
        None => text,
    };
    Ok(Output { stdout, stderr: if out.is_some() { String::new() } else { summary }, code: 0 })
}

pub fn check_cmd(path: &Path, bad: &str, args: &CompletionArgs) -> Result<Output> {
    let (spec, a, trs, cfg) = completion_inputs(path, args)?;
    let bad_a = spec.automaton(bad).ok_or_else(|| CommandError::Missing {
        path: shown(path),
        what: "automaton",
        name: Some(bad.into()),
    })?;
    Ok(match check_reachability(&a, bad_a, &trs, &cfg)? {
        Verdict::Safe => Output::text("Safe\n".into()),
        Verdict::Unknown { converged, witness } => {
            let mut s = String::from("Unknown");
            if !converged {
                s.push_str(": completion did not converge");
            }
            if let Some(w) = witness {
                s.push_str(&format!("{}possible bad term {w}", if converged { ": " } else { "; " }));
            }
            Output { stdout: s + "\n", stderr: String::new(), code: NEGATIVE }
        }
    })
}

pub fn member_cmd(path: &Path, name: Option<&str>, term: &str) -> Result<Output> {
    let (_, _, a) = load_automaton(path, name)?;
    let t = parse_term(term, a.alphabet()).map_err(CommandError::Term)?.abstracted();
    let yes = a.member(&t)?;
    Ok(Output { stdout: format!("{yes}\n"), stderr: String::new(), code: if yes { 0 } else { NEGATIVE } })
}

fn partition_for(a: &Lta, spec: &SpecFile, partition_file: Option<&PathBuf>) -> Result<Partition> {
    if let Some(p) = partition_file {
        let pspec = load_spec(p)?;
        return pspec.partition.ok_or_else(|| CommandError::NoPartition { path: shown(p) });
    }
    Ok(match &spec.partition {
        Some(p) => p.clone(),
        None => Partition::from_cuts(a.eliminate_epsilons().lambdas().map(|(v, _)| v)),
    })
}

pub fn det_cmd(path: &Path, name: Option<&str>, partition: Option<&PathBuf>) -> Result<Output> {
    let (spec, n, a) = load_automaton(path, name)?;
    let part = partition_for(&a, &spec, partition)?;
    let report = determinize_report(&Plta::from_lta(&a, &part));
    let stderr =
        if report.approximate { "note: lambda values were joined within a block\n".into() } else { String::new() };
    Ok(Output { stdout: print_standalone(&n, report.result.base(), Some(&part)), stderr, code: 0 })
}

pub fn min_cmd(path: &Path, name: Option<&str>, partition: Option<&PathBuf>) -> Result<Output> {
    let (spec, n, a) = load_automaton(path, name)?;
    let part = partition_for(&a, &spec, partition)?;
    let mut p = Plta::from_lta(&a, &part);
    if !a.is_deterministic() {
        p = determinize_report(&p).result;
    }
    let m = minimize(&p)?;
    Ok(Output::text(print_standalone(&n, m.base(), Some(&part))))
}

pub fn reduce_cmd(path: &Path, name: Option<&str>) -> Result<Output> {
    let (spec, n, a) = load_automaton(path, name)?;
    Ok(Output::text(print_standalone(&n, &a.reduce(), spec.partition.as_ref())))
}

/// Loads the first automata of two files, which must agree on arities.
fn load_pair(left: &Path, right: &Path) -> Result<(Lta, SpecFile, Lta)> {
    let (_, _, a) = load_automaton(left, None)?;
    let (spec, _, b) = load_automaton(right, None)?;
    for (symbol, l) in a.alphabet().passive() {
        match b.alphabet().passive_arity(symbol) {
            Some(r) if r != l => return Err(CommandError::ArityConflict { symbol: symbol.into(), left: l, right: r }),
            _ => {}
        }
    }
    Ok((a, spec, b))
}

pub fn union_cmd(left: &Path, right: &Path) -> Result<Output> {
    let (a, _, b) = load_pair(left, right)?;
    Ok(Output::text(print_standalone("union", &a.union(&b), None)))
}

pub fn inter_cmd(left: &Path, right: &Path) -> Result<Output> {
    let (a, _, b) = load_pair(left, right)?;
    Ok(Output::text(print_standalone("intersection", &a.intersection(&b), None)))
}

pub fn included_cmd(left: &Path, right: &Path) -> Result<Output> {
    let (a, spec, b) = load_pair(left, right)?;
    let inc = a.included_in(&b, spec.partition.as_ref());
    let mut s = if inc.included { "included".to_string() } else { "not included".to_string() };
    if let Some(w) = &inc.counterexample {
        s.push_str(&format!(": {w}"));
    }
    if inc.approximate {
        s.push_str(" (right side over-approximated)");
    }
    Ok(Output { stdout: s + "\n", stderr: String::new(), code: if inc.included { 0 } else { NEGATIVE } })
}

pub fn dot_cmd(path: &Path, name: Option<&str>) -> Result<Output> {
    let (_, _, a) = load_automaton(path, name)?;
    Ok(Output::text(a.to_dot()))
}

pub fn bench_peano_cmd(x: u64, y: u64) -> Output {
    let r = peano_benchmark(x, y);
    Output::text(format!("peano_steps={} builtin_steps={}\n", r.peano_steps, r.builtin_steps))
}
