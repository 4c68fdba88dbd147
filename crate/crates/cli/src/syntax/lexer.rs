//! Tokens of the spec language.
//!
//! Identifiers may carry glued suffix groups so that generated state names
//! such as `q[5,+inf[` or `q{q1,q2}` read back as single names: a `{...}`
//! group or an interval-shaped `[..`/`]..` group directly after identifier
//! characters belongs to the identifier.

use super::{Loc, SyntaxError, SyntaxErrorKind};
use lta_core::lattice::Interval;
use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    Interval(Interval),
    /// Operators and punctuation, e.g. `->`, `<=`, `{`, `,`.
    Punct(&'static str),
    /// Line break outside parentheses.
    Newline,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(k) => format!("`{k}`"),
            Tok::Interval(v) => format!("`{v}`"),
            Tok::Punct(p) => format!("`{p}`"),
            Tok::Newline => "end of line".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub loc: Loc,
    /// Byte offsets in the source.
    pub start: usize,
    pub end: usize,
}

const PUNCT: [&str; 22] = [
    "->", "<=", ">=", "==", "!=", "&&", "/\\", "{", "}", "(", ")", ",", ";", ":", "=", "<", ">", "+", "-", "*", "[",
    "]",
];

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '.' | '!')
}

/// Length of an interval literal at the start of `s`, if there is one.
fn interval_len(s: &str) -> Option<usize> {
    let mut chars = s.char_indices();
    let (_, open) = chars.next()?;
    if !matches!(open, '[' | ']') {
        return None;
    }
    let mut commas = 0;
    for (i, c) in chars {
        match c {
            ',' => commas += 1,
            '[' | ']' if commas == 1 => {
                let body = &s[1..i];
                let ok = body.split(',').all(|b| {
                    let b = b.trim();
                    let digits = b.strip_prefix(['-', '+']).unwrap_or(b);
                    digits == "inf" || (!digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()))
                });
                return ok.then_some(i + 1);
            }
            c if c.is_ascii_digit() || c == ' ' || c == '+' || c == '-' || c.is_ascii_alphabetic() => {}
            _ => return None,
        }
    }
    None
}

/// Length of a balanced `{...}` group on one line.
fn brace_len(s: &str) -> Option<usize> {
    if !s.starts_with('{') {
        return None;
    }
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i + 1);
                }
            }
            '\n' => return None,
            _ => {}
        }
    }
    None
}

/// Keywords opening a block are never glued to a following brace.
const BLOCK_KEYWORDS: [&str; 6] = ["symbols", "builtins", "automaton", "trs", "equations", "config"];

pub fn lex(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    let advance = |text: &str, line: &mut usize, col: &mut usize| {
        for c in text.chars() {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        }
    };
    while i < src.len() {
        let rest = &src[i..];
        let c = rest.chars().next().expect("non-empty");
        let loc = Loc { line, col };
        let err = |kind| SyntaxError { loc, kind };
        let len = if c == '#' {
            rest.find('\n').unwrap_or(rest.len())
        } else if c == '\n' {
            if depth == 0 {
                out.push(Token { tok: Tok::Newline, loc, start: i, end: i + 1 });
            }
            1
        } else if c.is_whitespace() {
            c.len_utf8()
        } else if ident_start(c) {
            let mut n = rest.find(|c: char| !ident_char(c)).unwrap_or(rest.len());
            // `x!=1` is a comparison, not the name `x!`.
            if rest[..n].ends_with('!') && rest[n..].starts_with('=') {
                n -= 1;
            }
            let word = &rest[..n];
            if !BLOCK_KEYWORDS.contains(&word) {
                loop {
                    let tail = &rest[n..];
                    let Some(g) = interval_len(tail).or_else(|| brace_len(tail)) else { break };
                    n += g;
                    n += rest[n..].find(|c: char| !ident_char(c)).unwrap_or(rest.len() - n);
                }
            }
            out.push(Token { tok: Tok::Ident(rest[..n].to_string()), loc, start: i, end: i + n });
            n
        } else if c.is_ascii_digit() {
            let n = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
            let k: BigInt = rest[..n].parse().expect("digits");
            out.push(Token { tok: Tok::Int(k), loc, start: i, end: i + n });
            n
        } else if let Some(n) = interval_len(rest) {
            let v: Interval = rest[..n].parse().map_err(|e: lta_core::lattice::IntervalParseError| {
                err(SyntaxErrorKind::InvalidInterval(e.to_string()))
            })?;
            out.push(Token { tok: Tok::Interval(v), loc, start: i, end: i + n });
            n
        } else if let Some(p) = PUNCT.iter().find(|p| rest.starts_with(**p)) {
            match *p {
                "(" => depth += 1,
                ")" => depth = depth.saturating_sub(1),
                _ => {}
            }
            out.push(Token { tok: Tok::Punct(p), loc, start: i, end: i + p.len() });
            p.len()
        } else {
            return Err(err(SyntaxErrorKind::UnexpectedChar(c)));
        };
        advance(&rest[..len], &mut line, &mut col);
        i += len;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        lex(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    fn id(s: &str) -> Tok {
        Tok::Ident(s.into())
    }

    #[test]
    fn transitions() {
        assert_eq!(
            toks("[1,2] -> q1\nf(q1) -> q2"),
            vec![
                Tok::Interval(Interval::range(1, 2)),
                Tok::Punct("->"),
                id("q1"),
                Tok::Newline,
                id("f"),
                Tok::Punct("("),
                id("q1"),
                Tok::Punct(")"),
                Tok::Punct("->"),
                id("q2"),
            ]
        );
    }

    #[test]
    fn glued_state_names() {
        assert_eq!(toks("q[5,+inf[ q{q1,q2} q!3"), vec![id("q[5,+inf["), id("q{q1,q2}"), id("q!3")]);
        assert_eq!(toks("symbols {"), vec![id("symbols"), Tok::Punct("{")]);
    }

    #[test]
    fn comparisons_and_comments() {
        assert_eq!(
            toks("x!=1 # note\ny <= -2"),
            vec![
                id("x"),
                Tok::Punct("!="),
                Tok::Int(1.into()),
                Tok::Newline,
                id("y"),
                Tok::Punct("<="),
                Tok::Punct("-"),
                Tok::Int(2.into())
            ]
        );
    }

    #[test]
    fn newlines_inside_parentheses_are_dropped() {
        assert_eq!(toks("f(\nx)").len(), 4);
    }

    #[test]
    fn locations() {
        let t = lex("a\n  b").unwrap();
        assert_eq!(t[2].loc, Loc { line: 2, col: 3 });
    }

    #[test]
    fn bad_character() {
        let e = lex("a\n ?").unwrap_err();
        assert_eq!(e.loc, Loc { line: 2, col: 2 });
    }
}
