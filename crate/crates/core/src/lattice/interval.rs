use super::{AtomSample, AtomicLattice, Bound, Lattice};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// An integer interval, possibly unbounded, or the empty interval.
///
/// Nonempty intervals always satisfy `lo <= hi`, `lo != +inf` and
/// `hi != -inf`; the constructors collapse anything else to bottom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    bounds: Option<(Bound, Bound)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid interval literal `{text}`: {reason}")]
pub struct IntervalParseError {
    pub text: String,
    pub reason: String,
}

impl Interval {
    pub const BOTTOM: Interval = Interval { bounds: None };

    pub fn new(lo: Bound, hi: Bound) -> Self {
        if lo == Bound::PosInf || hi == Bound::NegInf || lo > hi {
            Interval::BOTTOM
        } else {
            Interval { bounds: Some((lo, hi)) }
        }
    }

    pub fn range(lo: i64, hi: i64) -> Self {
        Interval::new(lo.into(), hi.into())
    }

    pub fn atom(v: impl Into<BigInt>) -> Self {
        let v = v.into();
        Interval::new(Bound::Int(v.clone()), Bound::Int(v))
    }

    pub fn at_least(lo: impl Into<BigInt>) -> Self {
        Interval::new(Bound::Int(lo.into()), Bound::PosInf)
    }

    pub fn at_most(hi: impl Into<BigInt>) -> Self {
        Interval::new(Bound::NegInf, Bound::Int(hi.into()))
    }

    pub fn full() -> Self {
        Interval::new(Bound::NegInf, Bound::PosInf)
    }

    pub fn lo(&self) -> Option<&Bound> {
        self.bounds.as_ref().map(|(l, _)| l)
    }

    pub fn hi(&self) -> Option<&Bound> {
        self.bounds.as_ref().map(|(_, h)| h)
    }

    pub fn bounds(&self) -> Option<(&Bound, &Bound)> {
        self.bounds.as_ref().map(|(l, h)| (l, h))
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_none()
    }

    pub fn contains(&self, v: &BigInt) -> bool {
        match &self.bounds {
            None => false,
            Some((lo, hi)) => {
                let b = Bound::Int(v.clone());
                *lo <= b && b <= *hi
            }
        }
    }

    /// The single integer of an atom.
    pub fn as_atom(&self) -> Option<&BigInt> {
        match &self.bounds {
            Some((Bound::Int(a), Bound::Int(b))) if a == b => Some(a),
            _ => None,
        }
    }

    /// Number of integers covered, `None` when unbounded.
    pub fn cardinality(&self) -> Option<BigInt> {
        match &self.bounds {
            None => Some(BigInt::zero()),
            Some((Bound::Int(a), Bound::Int(b))) => Some(b - a + BigInt::one()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        match (&self.bounds, &other.bounds) {
            (Some((a, b)), Some((c, d))) => Interval::new(a.add(c, &Bound::NegInf), b.add(d, &Bound::PosInf)),
            _ => Interval::BOTTOM,
        }
    }

    pub fn neg(&self) -> Interval {
        match &self.bounds {
            Some((a, b)) => Interval::new(b.neg(), a.neg()),
            None => Interval::BOTTOM,
        }
    }

    /// `[a,b] - [c,d] = [a-d, b-c]`.
    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    /// Hull of the four endpoint products, with `0 * inf = 0`.
    pub fn mul(&self, other: &Interval) -> Interval {
        match (&self.bounds, &other.bounds) {
            (Some((a, b)), Some((c, d))) => {
                let products = [a.mul(c), a.mul(d), b.mul(c), b.mul(d)];
                let lo = products.iter().min().cloned().expect("four products");
                let hi = products.iter().max().cloned().expect("four products");
                Interval::new(lo, hi)
            }
            _ => Interval::BOTTOM,
        }
    }

    /// Set difference, as up to two intervals.
    pub fn difference(&self, other: &Interval) -> Vec<Interval> {
        let Some((lo, hi)) = &self.bounds else {
            return Vec::new();
        };
        let Some((olo, ohi)) = &other.bounds else {
            return vec![self.clone()];
        };
        let mut out = Vec::new();
        if olo > lo {
            let left = Interval::new(lo.clone(), olo.pred().min(hi.clone()));
            if !left.is_empty() {
                out.push(left);
            }
        }
        if ohi < hi {
            let right = Interval::new(ohi.succ().max(lo.clone()), hi.clone());
            if !right.is_empty() {
                out.push(right);
            }
        }
        out
    }

    /// Whether the two intervals share an integer.
    pub fn overlaps(&self, other: &Interval) -> bool {
        !self.glb(other).is_empty()
    }

    /// Display with open brackets on infinite ends and closed ones
    /// elsewhere, e.g. `[5,+inf[` or `]-inf,+inf[`.
    pub fn display_half_open(&self) -> String {
        self.to_string()
    }

    /// Display that writes every bound closed, e.g. `[5,+inf]`.
    pub fn display_closed(&self) -> String {
        match &self.bounds {
            None => "bot".into(),
            Some((lo, hi)) => format!("[{lo},{hi}]"),
        }
    }
}

impl Lattice for Interval {
    fn bottom() -> Self {
        Interval::BOTTOM
    }

    fn top() -> Self {
        Interval::full()
    }

    fn leq(&self, other: &Self) -> bool {
        match (&self.bounds, &other.bounds) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some((a, b)), Some((c, d))) => c <= a && b <= d,
        }
    }

    fn lub(&self, other: &Self) -> Self {
        match (&self.bounds, &other.bounds) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            (Some((a, b)), Some((c, d))) => Interval::new(a.clone().min(c.clone()), b.clone().max(d.clone())),
        }
    }

    fn glb(&self, other: &Self) -> Self {
        match (&self.bounds, &other.bounds) {
            (Some((a, b)), Some((c, d))) => Interval::new(a.clone().max(c.clone()), b.clone().min(d.clone())),
            _ => Interval::BOTTOM,
        }
    }

    /// Standard interval widening: a bound that moved is pushed to infinity.
    fn widen(&self, next: &Self) -> Self {
        match (&self.bounds, &next.bounds) {
            (None, _) => next.clone(),
            (_, None) => self.clone(),
            (Some((a, b)), Some((c, d))) => {
                let lo = if c < a { Bound::NegInf } else { a.clone() };
                let hi = if d > b { Bound::PosInf } else { b.clone() };
                Interval::new(lo, hi)
            }
        }
    }

    fn is_bottom(&self) -> bool {
        self.bounds.is_none()
    }
}

impl AtomicLattice for Interval {
    type Concrete = BigInt;

    fn alpha(value: &BigInt) -> Self {
        Interval::atom(value.clone())
    }

    fn atoms_within(&self, cap: usize) -> AtomSample<Self> {
        let Some((lo, hi)) = &self.bounds else {
            return AtomSample { atoms: Vec::new(), truncated: false };
        };
        let mut atoms = Vec::new();
        match (lo, hi) {
            (Bound::Int(start), _) => {
                let mut v = start.clone();
                while atoms.len() < cap && Bound::Int(v.clone()) <= *hi {
                    atoms.push(Interval::atom(v.clone()));
                    v += 1;
                }
            }
            (_, Bound::Int(end)) => {
                let mut v = end.clone();
                while atoms.len() < cap {
                    atoms.push(Interval::atom(v.clone()));
                    v -= 1;
                }
            }
            _ => {
                // Both ends unbounded: 0, 1, -1, 2, -2, ...
                let mut k = BigInt::zero();
                while atoms.len() < cap {
                    if k.is_zero() {
                        atoms.push(Interval::atom(0));
                    } else {
                        atoms.push(Interval::atom(k.clone()));
                        if atoms.len() < cap {
                            atoms.push(Interval::atom(-k.clone()));
                        }
                    }
                    k += 1;
                }
            }
        }
        let truncated = match self.cardinality() {
            Some(n) => n > BigInt::from(atoms.len()),
            None => true,
        };
        AtomSample { atoms, truncated }
    }

    fn is_atom(&self) -> bool {
        self.as_atom().is_some()
    }

    fn apply_op(name: &str, args: &[Self]) -> Option<Self> {
        let [a, b] = args else { return None };
        Some(match name {
            "+" => a.add(b),
            "-" => a.sub(b),
            "*" => a.mul(b),
            "lub" => a.lub(b),
            "glb" => a.glb(b),
            _ => return None,
        })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.bounds {
            None => f.write_str("bot"),
            Some((lo, hi)) => {
                let open = if lo.is_finite() { '[' } else { ']' };
                let close = if hi.is_finite() { ']' } else { '[' };
                write!(f, "{open}{lo},{hi}{close}")
            }
        }
    }
}

impl FromStr for Interval {
    type Err = IntervalParseError;

    /// Accepts `[a,b]` with either bracket facing either way (infinite
    /// bounds are always excluded, so orientation only matters for finite
    /// ones), `bot`, `top`, and the infinities `-inf`, `+inf`, `inf`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| IntervalParseError { text: text.to_string(), reason: reason.into() };
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        match s.as_str() {
            "bot" | "⊥" => return Ok(Interval::BOTTOM),
            "top" | "⊤" => return Ok(Interval::full()),
            _ => {}
        }
        let mut chars = s.chars();
        let open = chars.next().ok_or_else(|| err("empty literal"))?;
        let close = chars.next_back().ok_or_else(|| err("missing closing bracket"))?;
        if !matches!(open, '[' | ']') || !matches!(close, '[' | ']') {
            return Err(err("expected brackets"));
        }
        let body = chars.as_str();
        let (l, h) = body.split_once(',').ok_or_else(|| err("expected `lo,hi`"))?;
        let lo = parse_bound(l).ok_or_else(|| err("bad lower bound"))?;
        let hi = parse_bound(h).ok_or_else(|| err("bad upper bound"))?;
        if lo == Bound::PosInf || hi == Bound::NegInf {
            return Err(err("infinite bound on the wrong side"));
        }
        // A finite bound whose bracket faces away is exclusive.
        let lo = if open == ']' && lo.is_finite() { lo.succ() } else { lo };
        let hi = if close == '[' && hi.is_finite() { hi.pred() } else { hi };
        Ok(Interval::new(lo, hi))
    }
}

fn parse_bound(s: &str) -> Option<Bound> {
    match s {
        "-inf" | "-∞" => Some(Bound::NegInf),
        "+inf" | "inf" | "+∞" | "∞" => Some(Bound::PosInf),
        _ => {
            let digits = s.strip_prefix('+').unwrap_or(s);
            digits.parse::<BigInt>().ok().map(Bound::Int)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["[1,2]", "[5,+inf[", "]-inf,0]", "]-inf,+inf[", "bot", "[-3,-3]"] {
            assert_eq!(iv(s).to_string(), s);
        }
        assert_eq!(iv("[5,+inf]"), Interval::at_least(5));
        assert_eq!(iv("[3,2]"), Interval::BOTTOM);
        assert_eq!(iv("]1,4["), Interval::range(2, 3));
        assert_eq!(iv("top"), Interval::full());
        assert!("[1;2]".parse::<Interval>().is_err());
        assert!("[+inf,3]".parse::<Interval>().is_err());
    }

    #[test]
    fn arithmetic_matches_endpoint_rules() {
        assert_eq!(iv("[1,2]").add(&iv("[1,1]")), iv("[2,3]"));
        assert_eq!(iv("[1,2]").sub(&iv("[0,5]")), iv("[-4,2]"));
        assert_eq!(iv("[-2,3]").mul(&iv("[4,5]")), iv("[-10,15]"));
        assert_eq!(iv("[0,0]").mul(&iv("]-inf,+inf[")), iv("[0,0]"));
        assert_eq!(iv("[5,+inf[").add(&iv("[2,2]")), iv("[7,+inf["));
        assert_eq!(iv("[-1,2]").mul(&iv("[3,+inf[")), iv("]-inf,+inf["));
        assert_eq!(Interval::BOTTOM.add(&iv("[1,1]")), Interval::BOTTOM);
    }

    #[test]
    fn widening_stabilises_increasing_chain() {
        let chain = [iv("[2,8]"), iv("[5,14]"), iv("[8,20]"), iv("[11,26]")];
        let mut acc = chain[0].clone();
        let mut seen = vec![acc.clone()];
        for next in &chain[1..] {
            acc = acc.widen(next);
            seen.push(acc.clone());
        }
        assert_eq!(acc, iv("[2,+inf["));
        assert_eq!(seen[1], seen[3]);
    }

    #[test]
    fn difference_splits_around_hole() {
        assert_eq!(iv("[0,10]").difference(&iv("[3,4]")), vec![iv("[0,2]"), iv("[5,10]")]);
        assert_eq!(iv("]-inf,+inf[").difference(&iv("[0,+inf[")), vec![iv("]-inf,-1]")]);
        assert!(iv("[1,2]").difference(&iv("[0,5]")).is_empty());
        assert_eq!(iv("[1,2]").difference(&iv("[7,9]")), vec![iv("[1,2]")]);
    }

    #[test]
    fn atoms_are_enumerated_from_a_finite_end() {
        let s = iv("[1,3]").atoms_within(10);
        assert_eq!(s.atoms, vec![iv("[1,1]"), iv("[2,2]"), iv("[3,3]")]);
        assert!(!s.truncated);
        let s = iv("[5,+inf[").atoms_within(2);
        assert_eq!(s.atoms, vec![iv("[5,5]"), iv("[6,6]")]);
        assert!(s.truncated);
        let s = iv("]-inf,+inf[").atoms_within(3);
        assert_eq!(s.atoms, vec![iv("[0,0]"), iv("[1,1]"), iv("[-1,-1]")]);
    }

    #[test]
    fn operator_table_rejects_unknown_names() {
        assert_eq!(Interval::apply_op("+", &[iv("[1,1]"), iv("[2,2]")]), Some(iv("[3,3]")));
        assert_eq!(Interval::apply_op("/", &[iv("[1,1]"), iv("[2,2]")]), None);
        assert_eq!(Interval::apply_op("+", &[iv("[1,1]")]), None);
    }
}
