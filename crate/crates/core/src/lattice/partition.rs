use super::{Bound, Interval, Lattice};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// A finite set of pairwise disjoint intervals covering every integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Interval>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionViolation {
    #[error("partition has no blocks")]
    Empty,
    #[error("partition block is empty")]
    EmptyBlock,
    #[error("blocks {0} and {1} overlap")]
    Overlap(Interval, Interval),
    #[error("values {0} are not covered by any block")]
    Gap(Interval),
}

impl Partition {
    /// Validates and sorts the blocks.
    pub fn new(blocks: Vec<Interval>) -> Result<Self, PartitionViolation> {
        let violations = Self::check(&blocks);
        match violations.into_iter().next() {
            Some(v) => Err(v),
            None => {
                let mut blocks = blocks;
                blocks.sort();
                Ok(Partition { blocks })
            }
        }
    }

    /// The one-block partition `{]-inf,+inf[}`.
    pub fn trivial() -> Self {
        Partition { blocks: vec![Interval::full()] }
    }

    /// Every violation in `blocks`: empty blocks, overlapping pairs and
    /// uncovered ranges.
    pub fn check(blocks: &[Interval]) -> Vec<PartitionViolation> {
        let mut out = Vec::new();
        if blocks.is_empty() {
            out.push(PartitionViolation::Empty);
            return out;
        }
        if blocks.iter().any(Interval::is_empty) {
            out.push(PartitionViolation::EmptyBlock);
        }
        let mut sorted: Vec<&Interval> = blocks.iter().filter(|b| !b.is_empty()).collect();
        sorted.sort();
        for (i, a) in sorted.iter().enumerate() {
            for b in &sorted[i + 1..] {
                if a.overlaps(b) {
                    out.push(PartitionViolation::Overlap((*a).clone(), (*b).clone()));
                }
            }
        }
        // Walk the sorted blocks and report every uncovered stretch.
        let mut next_free = Bound::NegInf;
        let mut started = false;
        for b in &sorted {
            let (lo, hi) = b.bounds().expect("nonempty");
            let gap = if started {
                Interval::new(next_free.clone(), lo.pred())
            } else {
                Interval::new(Bound::NegInf, lo.pred())
            };
            if !gap.is_empty() && *lo != Bound::NegInf {
                out.push(PartitionViolation::Gap(gap));
            }
            let after = hi.succ();
            if !started || after > next_free {
                next_free = after;
            }
            started = true;
        }
        if next_free != Bound::PosInf {
            out.push(PartitionViolation::Gap(Interval::new(next_free, Bound::PosInf)));
        }
        out
    }

    /// The partition whose blocks are cut at every endpoint of `values`, so
    /// each value is a union of blocks.
    pub fn from_cuts<'a>(values: impl IntoIterator<Item = &'a Interval>) -> Self {
        // Cut points are the first integers of new blocks.
        let mut cuts = BTreeSet::new();
        for v in values {
            if let Some((lo, hi)) = v.bounds() {
                if lo.is_finite() {
                    cuts.insert(lo.clone());
                }
                if hi.is_finite() {
                    cuts.insert(hi.succ());
                }
            }
        }
        let mut blocks = Vec::new();
        let mut start = Bound::NegInf;
        for c in cuts {
            blocks.push(Interval::new(start, c.pred()));
            start = c;
        }
        blocks.push(Interval::new(start, Bound::PosInf));
        Partition { blocks }
    }

    pub fn blocks(&self) -> &[Interval] {
        &self.blocks
    }

    /// Blocks meeting `value`, each paired with the overlapping part.
    pub fn block_of(&self, value: &Interval) -> Vec<(&Interval, Interval)> {
        self.blocks
            .iter()
            .filter_map(|b| {
                let part = b.glb(value);
                (!part.is_empty()).then_some((b, part))
            })
            .collect()
    }

    /// Whether every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.blocks.iter().all(|b| coarser.blocks.iter().any(|c| b.leq(c)))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }

    #[test]
    fn accepts_a_proper_partition() {
        let p = Partition::new(vec![iv("[3,+inf["), iv("]-inf,0]"), iv("[1,2]")]).unwrap();
        assert_eq!(p.blocks()[0], iv("]-inf,0]"));
        assert_eq!(p.block_of(&iv("[2,5]")).len(), 2);
    }

    #[test]
    fn reports_missing_negative_values() {
        let v = Partition::check(&[iv("[0,+inf[")]);
        assert_eq!(v, vec![PartitionViolation::Gap(iv("]-inf,-1]"))]);
    }

    #[test]
    fn reports_overlaps_and_inner_gaps() {
        let v = Partition::check(&[iv("]-inf,3]"), iv("[2,5]"), iv("[8,+inf[")]);
        assert!(v.contains(&PartitionViolation::Overlap(iv("]-inf,3]"), iv("[2,5]"))));
        assert!(v.contains(&PartitionViolation::Gap(iv("[6,7]"))));
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn cuts_isolate_every_value() {
        let p = Partition::from_cuts([&iv("[1,2]"), &iv("[2,+inf[")]);
        assert_eq!(p.blocks(), &[iv("]-inf,0]"), iv("[1,1]"), iv("[2,2]"), iv("[3,+inf[")]);
        assert!(Partition::check(p.blocks()).is_empty());
        assert!(p.refines(&Partition::trivial()));
        assert!(!Partition::trivial().refines(&p));
    }
}
