//! Abstract lattices labelling automaton leaves.
//!
//! The automata in this crate are built over [`Interval`], the lattice of
//! integer intervals with infinite bounds. The [`Lattice`] and
//! [`AtomicLattice`] traits capture the contract the rest of the crate relies
//! on, and [`Powerset3`] is a tiny finite instance used to check the lattice
//! laws exhaustively.

mod bound;
mod interval;
mod partition;
mod powerset;

pub use bound::Bound;
pub use interval::{Interval, IntervalParseError};
pub use partition::{Partition, PartitionViolation};
pub use powerset::Powerset3;

use std::fmt::Debug;

/// A bounded lattice with a widening operator.
pub trait Lattice: Clone + Eq + Ord + Debug {
    fn bottom() -> Self;
    fn top() -> Self;
    fn leq(&self, other: &Self) -> bool;
    fn lub(&self, other: &Self) -> Self;
    fn glb(&self, other: &Self) -> Self;

    /// Widening: `self ∇ next`. Must cover `lub(self, next)` and force every
    /// ascending chain to stabilise.
    fn widen(&self, next: &Self) -> Self;

    fn is_bottom(&self) -> bool {
        *self == Self::bottom()
    }
}

/// Result of a bounded atom enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomSample<L> {
    pub atoms: Vec<L>,
    /// `true` when more atoms exist below the enumerated value than were returned.
    pub truncated: bool,
}

/// An atomic lattice connected to a concrete domain.
pub trait AtomicLattice: Lattice {
    type Concrete;

    /// Abstraction of a single concrete value; always an atom.
    fn alpha(value: &Self::Concrete) -> Self;

    /// Up to `cap` distinct atoms below `self`.
    fn atoms_within(&self, cap: usize) -> AtomSample<Self>;

    fn is_atom(&self) -> bool;

    /// Abstract operator table: `None` when `name` is not an operator of this
    /// lattice or the arity is wrong.
    fn apply_op(name: &str, args: &[Self]) -> Option<Self>;
}
