use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// An interval endpoint: an integer or one of the two infinities.
///
/// The derived ordering follows declaration order, so `NegInf < Int(_) < PosInf`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    NegInf,
    Int(BigInt),
    PosInf,
}

impl Bound {
    pub fn int(v: impl Into<BigInt>) -> Self {
        Bound::Int(v.into())
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Bound::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Bound::Int(_))
    }

    fn sign(&self) -> Ordering {
        match self {
            Bound::NegInf => Ordering::Less,
            Bound::PosInf => Ordering::Greater,
            Bound::Int(v) => v.sign_cmp(),
        }
    }

    /// Sum of two bounds. Opposite infinities cannot meet for well-formed
    /// intervals; `toward` decides the result should they do.
    pub(crate) fn add(&self, other: &Bound, toward: &Bound) -> Bound {
        match (self, other) {
            (Bound::Int(a), Bound::Int(b)) => Bound::Int(a + b),
            (Bound::NegInf, Bound::PosInf) | (Bound::PosInf, Bound::NegInf) => toward.clone(),
            (Bound::NegInf, _) | (_, Bound::NegInf) => Bound::NegInf,
            _ => Bound::PosInf,
        }
    }

    pub(crate) fn neg(&self) -> Bound {
        match self {
            Bound::NegInf => Bound::PosInf,
            Bound::PosInf => Bound::NegInf,
            Bound::Int(v) => Bound::Int(-v),
        }
    }

    /// Product on the extended integers with `0 * inf = 0`.
    pub(crate) fn mul(&self, other: &Bound) -> Bound {
        if let (Bound::Int(a), Bound::Int(b)) = (self, other) {
            return Bound::Int(a * b);
        }
        match self.sign() as i8 * other.sign() as i8 {
            0 => Bound::Int(BigInt::zero()),
            1 => Bound::PosInf,
            _ => Bound::NegInf,
        }
    }

    pub(crate) fn succ(&self) -> Bound {
        match self {
            Bound::Int(v) => Bound::Int(v + BigInt::one()),
            other => other.clone(),
        }
    }

    pub(crate) fn pred(&self) -> Bound {
        match self {
            Bound::Int(v) => Bound::Int(v - BigInt::one()),
            other => other.clone(),
        }
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl From<i64> for Bound {
    fn from(v: i64) -> Self {
        Bound::Int(BigInt::from(v))
    }
}

impl From<BigInt> for Bound {
    fn from(v: BigInt) -> Self {
        Bound::Int(v)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::PosInf => f.write_str("+inf"),
            Bound::Int(v) => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_puts_infinities_at_the_ends() {
        assert!(Bound::NegInf < Bound::from(-1_000_000));
        assert!(Bound::from(1_000_000) < Bound::PosInf);
        assert!(Bound::from(2) < Bound::from(3));
    }

    #[test]
    fn zero_absorbs_infinity_in_products() {
        assert_eq!(Bound::from(0).mul(&Bound::PosInf), Bound::from(0));
        assert_eq!(Bound::NegInf.mul(&Bound::from(0)), Bound::from(0));
        assert_eq!(Bound::from(-2).mul(&Bound::PosInf), Bound::NegInf);
        assert_eq!(Bound::NegInf.mul(&Bound::NegInf), Bound::PosInf);
    }

    #[test]
    fn sums_saturate_at_infinity() {
        assert_eq!(Bound::from(3).add(&Bound::PosInf, &Bound::PosInf), Bound::PosInf);
        assert_eq!(Bound::NegInf.add(&Bound::from(3), &Bound::PosInf), Bound::NegInf);
        assert_eq!(Bound::from(3).add(&Bound::from(4), &Bound::PosInf), Bound::from(7));
    }
}
