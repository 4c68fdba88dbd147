//! Canonical text output. Everything printed here parses back to the same
//! value.

use super::SpecFile;
use lta_core::automaton::{Lta, State};
use lta_core::lattice::Partition;
use lta_core::term::Alphabet;
use std::fmt::Write;

fn header(out: &mut String, alphabet: &Alphabet, partition: Option<&Partition>) {
    out.push_str("lattice interval-int\n");
    let symbols: Vec<String> = alphabet.passive().map(|(f, k)| format!("{f}:{k}")).collect();
    writeln!(out, "symbols {{ {} }}", symbols.join(" ")).expect("write to string");
    let ops: Vec<&str> = alphabet.builtins().map(|op| op.name()).collect();
    writeln!(out, "builtins {{ {} }}", ops.join(" ")).expect("write to string");
    if let Some(p) = partition {
        let blocks: Vec<String> = p.blocks().iter().map(|b| b.to_string()).collect();
        writeln!(out, "partition {}", blocks.join(" ")).expect("write to string");
    }
}

/// An `automaton NAME { ... }` block listing every state, the final states
/// and the transitions in canonical order.
pub fn print_automaton(name: &str, a: &Lta) -> String {
    let names = |qs: &mut dyn Iterator<Item = &State>| qs.map(|q| format!(" {q}")).collect::<String>();
    let mut out = format!("automaton {name} {{\n");
    writeln!(out, "  states{}", names(&mut a.states().iter())).expect("write to string");
    writeln!(out, "  final{}", names(&mut a.finals().iter())).expect("write to string");
    for t in a.transitions() {
        writeln!(out, "  {t}").expect("write to string");
    }
    out.push_str("}\n");
    out
}

/// A complete spec file holding one automaton.
pub fn print_standalone(name: &str, a: &Lta, partition: Option<&Partition>) -> String {
    let mut out = String::new();
    header(&mut out, a.alphabet(), partition);
    out.push_str(&print_automaton(name, a));
    out
}

pub fn print_spec(spec: &SpecFile) -> String {
    let mut out = String::new();
    header(&mut out, &spec.alphabet, spec.partition.as_ref());
    for (name, a) in &spec.automata {
        out.push_str(&print_automaton(name, a));
    }
    for trs in &spec.trs {
        writeln!(out, "trs {} {{", trs.name).expect("write to string");
        for r in &trs.rules {
            writeln!(out, "  {r}").expect("write to string");
        }
        out.push_str("}\n");
    }
    for eqs in &spec.equations {
        writeln!(out, "equations {} {{", eqs.name).expect("write to string");
        for e in &eqs.equations {
            writeln!(out, "  {e}").expect("write to string");
        }
        out.push_str("}\n");
    }
    let c = &spec.config;
    let mut entries = Vec::new();
    if let Some(k) = c.widen_after {
        entries.push(format!("widen-after {k}"));
    }
    if let Some(k) = c.max_steps {
        entries.push(format!("max-steps {k}"));
    }
    if let Some(k) = c.max_states {
        entries.push(format!("max-states {k}"));
    }
    if c.strict_int {
        entries.push("strict-int".into());
    }
    if !entries.is_empty() {
        writeln!(out, "config {{ {} }}", entries.join("; ")).expect("write to string");
    }
    out
}
