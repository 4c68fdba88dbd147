use super::{AtomSample, AtomicLattice, Lattice};

/// Subsets of `{0, 1, 2}` ordered by inclusion, stored as a bit mask.
///
/// Finite height, so widening is the join. Used to exercise the lattice laws
/// exhaustively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Powerset3(u8);

impl Powerset3 {
    pub fn from_bits(bits: u8) -> Self {
        Powerset3(bits & 0b111)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = Powerset3> {
        (0..8).map(Powerset3)
    }
}

impl Lattice for Powerset3 {
    fn bottom() -> Self {
        Powerset3(0)
    }

    fn top() -> Self {
        Powerset3(0b111)
    }

    fn leq(&self, other: &Self) -> bool {
        self.0 & !other.0 == 0
    }

    fn lub(&self, other: &Self) -> Self {
        Powerset3(self.0 | other.0)
    }

    fn glb(&self, other: &Self) -> Self {
        Powerset3(self.0 & other.0)
    }

    fn widen(&self, next: &Self) -> Self {
        self.lub(next)
    }
}

impl AtomicLattice for Powerset3 {
    type Concrete = u8;

    fn alpha(value: &u8) -> Self {
        Powerset3(1 << (value % 3))
    }

    fn atoms_within(&self, cap: usize) -> AtomSample<Self> {
        let all: Vec<_> = (0..3).filter(|i| self.0 & (1 << i) != 0).map(|i| Powerset3(1 << i)).collect();
        let truncated = all.len() > cap;
        AtomSample { atoms: all.into_iter().take(cap).collect(), truncated }
    }

    fn is_atom(&self) -> bool {
        self.0.count_ones() == 1
    }

    fn apply_op(name: &str, args: &[Self]) -> Option<Self> {
        let [a, b] = args else { return None };
        match name {
            "lub" => Some(a.lub(b)),
            "glb" => Some(a.glb(b)),
            _ => None,
        }
    }
}
