//! Lattice tree automata over integer intervals, with tree automata
//! completion for conditional term rewriting systems.

pub mod automaton;
pub mod completion;
pub mod lattice;
pub mod oracle;
pub mod partitioned;
pub mod rewriting;
pub mod solver;
pub mod term;
