use std::cmp::Ordering;
use std::fmt;

/// An automaton state, identified by its printable name.
///
/// States order naturally: digit runs compare as numbers, so `q2 < q10`.
/// The raw string breaks remaining ties (`q01` vs `q1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State(String);

impl State {
    pub fn new(name: impl Into<String>) -> Self {
        State(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl From<&str> for State {
    fn from(s: &str) -> Self {
        State(s.to_string())
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn chunks(s: &str) -> Vec<(bool, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut digit = None;
    for (i, c) in s.char_indices() {
        let d = c.is_ascii_digit();
        match digit {
            Some(prev) if prev != d => {
                out.push((prev, &s[start..i]));
                start = i;
            }
            _ => {}
        }
        digit = Some(d);
    }
    if let Some(d) = digit {
        out.push((d, &s[start..]));
    }
    out
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(&cb) {
        let ord = match (x, y) {
            ((true, u), (true, v)) => {
                let u = u.trim_start_matches('0');
                let v = v.trim_start_matches('0');
                u.len().cmp(&v.len()).then_with(|| u.cmp(v))
            }
            ((true, _), (false, _)) => Ordering::Less,
            ((false, _), (true, _)) => Ordering::Greater,
            ((false, u), (false, v)) => u.cmp(v),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len())
}
