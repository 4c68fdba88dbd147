use super::lexer::{lex, Tok, Token};
use super::{ConfigBlock, Loc, SpecFile, SyntaxError, SyntaxErrorKind as K};
use lta_core::automaton::{Head, Lta, State, Transition};
use lta_core::lattice::{Interval, Partition};
use lta_core::rewriting::{Equation, EquationSet, Predicate, Relation, RewriteRule, Trs};
use lta_core::term::{Alphabet, BuiltinOp, Term};
use std::collections::BTreeMap;

type Result<T> = std::result::Result<T, SyntaxError>;

const LATTICES: [&str; 2] = ["interval-int", "interval"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    eof: Loc,
}

fn end_loc(src: &str) -> Loc {
    let line = src.matches('\n').count() + 1;
    let col = src.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Loc { line, col }
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0, eof: end_loc(src) })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, n: usize) -> Option<&Tok> {
        self.toks.get(self.pos + n).map(|t| &t.tok)
    }

    fn loc(&self) -> Loc {
        self.toks.get(self.pos).map_or(self.eof, |t| t.loc)
    }

    fn error<T>(&self, kind: K) -> Result<T> {
        Err(SyntaxError { loc: self.loc(), kind })
    }

    fn unexpected<T>(&self, expected: &str) -> Result<T> {
        let found = self.peek().map_or("end of file".to_string(), Tok::describe);
        self.error(K::Unexpected { expected: expected.into(), found })
    }

    fn at(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn eat(&mut self, p: &str) -> bool {
        let hit = self.at(p);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect(&mut self, p: &str) -> Result<()> {
        if self.eat(p) {
            Ok(())
        } else {
            self.unexpected(&format!("`{p}`"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Loc)> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                let loc = self.loc();
                self.pos += 1;
                Ok((s, loc))
            }
            _ => self.unexpected(what),
        }
    }

    /// An identifier possibly made of dash-joined parts written without
    /// spaces, such as `widen-after`.
    fn dashed_ident(&mut self, what: &str) -> Result<(String, Loc)> {
        let (mut name, loc) = self.ident(what)?;
        while let (Some(dash), Some(next)) = (self.toks.get(self.pos), self.toks.get(self.pos + 1)) {
            let prev_end = self.toks[self.pos - 1].end;
            match (&dash.tok, &next.tok) {
                (Tok::Punct("-"), Tok::Ident(part)) if dash.start == prev_end && next.start == dash.end => {
                    name.push('-');
                    name.push_str(part);
                    self.pos += 2;
                }
                _ => break,
            }
        }
        Ok((name, loc))
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Some(Tok::Newline) | Some(Tok::Punct(";"))) {
            self.pos += 1;
        }
    }

    fn at_statement_end(&self) -> bool {
        matches!(self.peek(), None | Some(Tok::Newline) | Some(Tok::Punct(";")) | Some(Tok::Punct("}")))
    }

    fn end_statement(&mut self) -> Result<()> {
        if self.at_statement_end() {
            self.skip_separators();
            Ok(())
        } else {
            self.unexpected("end of statement")
        }
    }

    fn count(&mut self, what: &str) -> Result<usize> {
        match self.peek() {
            Some(Tok::Int(k)) => {
                let k = usize::try_from(k).or_else(|_| self.unexpected(what))?;
                self.pos += 1;
                Ok(k)
            }
            _ => self.unexpected(what),
        }
    }
}

fn builtin_token(tok: Option<&Tok>) -> Option<BuiltinOp> {
    match tok {
        Some(Tok::Punct(p)) => BuiltinOp::from_name(p),
        Some(Tok::Ident(s)) => BuiltinOp::from_name(s),
        _ => None,
    }
}

/// Parses a whole spec file.
pub fn parse_spec(src: &str) -> Result<SpecFile> {
    let mut p = Parser::new(src)?;
    let mut spec = SpecFile {
        lattice: String::new(),
        alphabet: Alphabet::new([]),
        partition: None,
        automata: Vec::new(),
        trs: Vec::new(),
        equations: Vec::new(),
        config: ConfigBlock::default(),
    };
    let mut names: BTreeMap<String, Loc> = BTreeMap::new();
    let mut declare = |name: &str, loc: Loc, kind: &str| -> Result<()> {
        let key = format!("{kind} {name}");
        match names.get(&key) {
            Some(first) => Err(SyntaxError { loc, kind: K::DuplicateName { name: name.into(), first: *first } }),
            None => {
                names.insert(key, loc);
                Ok(())
            }
        }
    };
    let mut lattice_seen = false;
    loop {
        p.skip_separators();
        if p.peek().is_none() {
            break;
        }
        let (kw, loc) = p.ident("a declaration")?;
        if !lattice_seen && kw != "lattice" {
            return Err(SyntaxError { loc, kind: K::MissingLattice });
        }
        match kw.as_str() {
            "lattice" => {
                declare("", loc, "lattice")?;
                let (name, at) = p.dashed_ident("a lattice name")?;
                if !LATTICES.contains(&name.as_str()) {
                    return Err(SyntaxError { loc: at, kind: K::UnknownLattice(name) });
                }
                spec.lattice = "interval-int".into();
                lattice_seen = true;
                p.end_statement()?;
            }
            "symbols" => parse_symbols(&mut p, &mut spec.alphabet)?,
            "builtins" => parse_builtins(&mut p, &mut spec.alphabet)?,
            "partition" => {
                let mut blocks = Vec::new();
                while let Some(Tok::Interval(v)) = p.peek() {
                    blocks.push(v.clone());
                    p.pos += 1;
                }
                let partition = Partition::new(blocks)
                    .map_err(|e| SyntaxError { loc, kind: K::InvalidPartition(e.to_string()) })?;
                spec.partition = Some(partition);
                p.end_statement()?;
            }
            "automaton" => {
                let (name, at) = p.ident("an automaton name")?;
                declare(&name, at, "automaton")?;
                let a = parse_automaton_body(&mut p, &spec.alphabet)?;
                spec.automata.push((name, a));
            }
            "trs" => {
                let (name, at) = p.ident("a rewrite system name")?;
                declare(&name, at, "trs")?;
                let rules = parse_block(&mut p, |p| parse_rule(p, &spec.alphabet))?;
                spec.trs.push(Trs { name, rules });
            }
            "equations" => {
                let (name, at) = p.ident("an equation set name")?;
                declare(&name, at, "equations")?;
                let equations = parse_block(&mut p, |p| parse_equation(p, &spec.alphabet))?;
                spec.equations.push(EquationSet { name, equations });
            }
            "config" => parse_config(&mut p, &mut spec.config)?,
            _ => {
                return Err(SyntaxError {
                    loc,
                    kind: K::Unexpected { expected: "a declaration".into(), found: format!("`{kw}`") },
                })
            }
        }
    }
    if !lattice_seen {
        return Err(SyntaxError { loc: Loc { line: 1, col: 1 }, kind: K::MissingLattice });
    }
    Ok(spec)
}

/// `{ item (sep item)* }` where items end at a newline or `;`.
fn parse_block<T>(p: &mut Parser, mut item: impl FnMut(&mut Parser) -> Result<T>) -> Result<Vec<T>> {
    p.expect("{")?;
    let mut out = Vec::new();
    loop {
        p.skip_separators();
        if p.eat("}") {
            return Ok(out);
        }
        if p.peek().is_none() {
            return p.unexpected("`}`");
        }
        out.push(item(p)?);
        p.end_statement()?;
    }
}

fn parse_symbols(p: &mut Parser, alphabet: &mut Alphabet) -> Result<()> {
    p.expect("{")?;
    let mut seen: BTreeMap<String, Loc> =
        alphabet.passive().map(|(f, _)| (f.to_string(), Loc { line: 0, col: 0 })).collect();
    loop {
        p.skip_separators();
        if p.eat("}") {
            return p.end_statement();
        }
        let (name, loc) = p.ident("a symbol declaration `name:arity`")?;
        p.expect(":")?;
        let arity = p.count("an arity")?;
        if BuiltinOp::from_name(&name).is_some() {
            return Err(SyntaxError { loc, kind: K::DuplicateName { name, first: Loc { line: 0, col: 0 } } });
        }
        if let Some(first) = seen.insert(name.clone(), loc) {
            return Err(SyntaxError { loc, kind: K::DuplicateName { name, first } });
        }
        alphabet.add_passive(&name, arity);
        p.eat(",");
    }
}

fn parse_builtins(p: &mut Parser, alphabet: &mut Alphabet) -> Result<()> {
    p.expect("{")?;
    let mut ops = Vec::new();
    loop {
        p.skip_separators();
        if p.eat("}") {
            break;
        }
        let loc = p.loc();
        let Some(op) = builtin_token(p.peek()) else {
            let found = p.peek().map_or("end of file".to_string(), Tok::describe);
            return Err(SyntaxError { loc, kind: K::UnknownSymbol(found.trim_matches('`').to_string()) });
        };
        p.pos += 1;
        if p.eat(":") {
            let arity = p.count("an arity")?;
            if arity != op.arity() {
                return Err(SyntaxError {
                    loc,
                    kind: K::ArityMismatch { symbol: op.name().into(), expected: op.arity(), found: arity },
                });
            }
        }
        ops.push(op);
        p.eat(",");
    }
    *alphabet = alphabet.clone().with_builtins(ops);
    p.end_statement()
}

fn parse_config(p: &mut Parser, config: &mut ConfigBlock) -> Result<()> {
    p.expect("{")?;
    loop {
        p.skip_separators();
        if p.eat("}") {
            return p.end_statement();
        }
        let (key, loc) = p.dashed_ident("a config key")?;
        match key.as_str() {
            "widen-after" => config.widen_after = Some(p.count("a count")?),
            "max-steps" => config.max_steps = Some(p.count("a count")?),
            "max-states" => config.max_states = Some(p.count("a count")?),
            "strict-int" => {
                config.strict_int = match p.peek() {
                    Some(Tok::Ident(v)) if v == "false" => {
                        p.pos += 1;
                        false
                    }
                    Some(Tok::Ident(v)) if v == "true" => {
                        p.pos += 1;
                        true
                    }
                    _ => true,
                }
            }
            _ => return Err(SyntaxError { loc, kind: K::UnknownConfigKey(key) }),
        }
    }
}

fn parse_automaton_body(p: &mut Parser, alphabet: &Alphabet) -> Result<Lta> {
    p.expect("{")?;
    let mut declared: Option<BTreeMap<String, Loc>> = None;
    let mut finals: Vec<(String, Loc)> = Vec::new();
    let mut transitions: Vec<ParsedTransition> = Vec::new();
    loop {
        p.skip_separators();
        if p.eat("}") {
            break;
        }
        if p.peek().is_none() {
            return p.unexpected("`}`");
        }
        let keyword = match (p.peek(), p.peek_at(1)) {
            (Some(Tok::Ident(k)), next) if (k == "states" || k == "final") && next != Some(&Tok::Punct("->")) => {
                Some(k.clone())
            }
            _ => None,
        };
        match keyword.as_deref() {
            Some("states") => {
                p.pos += 1;
                let declared = declared.get_or_insert_with(BTreeMap::new);
                while !p.at_statement_end() {
                    let (q, loc) = p.ident("a state name")?;
                    if let Some(first) = declared.get(&q) {
                        return Err(SyntaxError { loc, kind: K::DuplicateState { name: q, first: *first } });
                    }
                    declared.insert(q, loc);
                    p.eat(",");
                }
            }
            Some(_) => {
                p.pos += 1;
                while !p.at_statement_end() {
                    finals.push(p.ident("a state name")?);
                    p.eat(",");
                }
            }
            None => transitions.push(parse_transition(p, alphabet)?),
        }
        p.end_statement()?;
    }
    let mut a = Lta::new(alphabet.clone());
    if let Some(declared) = &declared {
        let used = finals.iter().chain(transitions.iter().flat_map(|(_, _, states)| states.iter()));
        for (q, loc) in used {
            if !declared.contains_key(q) {
                return Err(SyntaxError { loc: *loc, kind: K::UndeclaredState(q.clone()) });
            }
        }
        for q in declared.keys() {
            a.add_state(State::new(q.clone()));
        }
    }
    for (t, loc, _) in transitions {
        a.add_transition(t).map_err(|e| SyntaxError { loc, kind: K::Automaton(e) })?;
    }
    for (q, _) in finals {
        a.add_final(State::new(q));
    }
    Ok(a)
}

/// A transition with its location and the states it mentions.
type ParsedTransition = (Transition, Loc, Vec<(String, Loc)>);

fn parse_transition(p: &mut Parser, alphabet: &Alphabet) -> Result<ParsedTransition> {
    let loc = p.loc();
    let mut states = Vec::new();
    let check_arity = |symbol: &str, expected: usize, found: usize| -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(SyntaxError { loc, kind: K::ArityMismatch { symbol: symbol.into(), expected, found } })
        }
    };
    enum Lhs {
        Value(Interval),
        Head(Head, Vec<State>),
        State(State),
    }
    let lhs = match p.peek().cloned() {
        Some(Tok::Interval(v)) => {
            p.pos += 1;
            Lhs::Value(v)
        }
        Some(Tok::Int(_)) | Some(Tok::Punct("-")) if !matches!(p.peek_at(1), Some(Tok::Punct("("))) => {
            Lhs::Value(Interval::atom(signed_int(p)?))
        }
        Some(tok) => {
            let prefix_op = builtin_token(Some(&tok)).filter(|_| matches!(p.peek_at(1), Some(Tok::Punct("("))));
            if let Some(op) = prefix_op {
                p.pos += 1;
                let args = state_args(p, &mut states)?;
                check_arity(op.name(), op.arity(), args.len())?;
                Lhs::Head(Head::Builtin(op), args)
            } else {
                let (name, at) = p.ident("a transition")?;
                if p.at("(") {
                    let args = state_args(p, &mut states)?;
                    if let Some(k) = alphabet.passive_arity(&name) {
                        check_arity(&name, k, args.len())?;
                        Lhs::Head(Head::Passive(name), args)
                    } else if let Some(op) = BuiltinOp::from_name(&name) {
                        check_arity(&name, op.arity(), args.len())?;
                        Lhs::Head(Head::Builtin(op), args)
                    } else {
                        return Err(SyntaxError { loc: at, kind: K::UnknownSymbol(name) });
                    }
                } else if let Some(op) = builtin_token(p.peek()).filter(|o| o.is_infix()) {
                    p.pos += 1;
                    states.push((name.clone(), at));
                    let (rhs, rat) = p.ident("a state name")?;
                    states.push((rhs.clone(), rat));
                    Lhs::Head(Head::Builtin(op), vec![State::new(name), State::new(rhs)])
                } else {
                    match alphabet.passive_arity(&name) {
                        Some(0) => Lhs::Head(Head::Passive(name), Vec::new()),
                        Some(k) => {
                            return Err(SyntaxError {
                                loc: at,
                                kind: K::ArityMismatch { symbol: name, expected: k, found: 0 },
                            })
                        }
                        None => {
                            states.push((name.clone(), at));
                            Lhs::State(State::new(name))
                        }
                    }
                }
            }
        }
        None => return p.unexpected("a transition"),
    };
    p.expect("->")?;
    let (target, at) = p.ident("a target state")?;
    states.push((target.clone(), at));
    let target = State::new(target);
    let t = match lhs {
        Lhs::Value(value) => Transition::Lambda { value, target },
        Lhs::Head(head, args) => Transition::Ground { head, args, target },
        Lhs::State(from) => Transition::Epsilon { from, to: target },
    };
    Ok((t, loc, states))
}

fn state_args(p: &mut Parser, states: &mut Vec<(String, Loc)>) -> Result<Vec<State>> {
    p.expect("(")?;
    let mut args = Vec::new();
    if p.eat(")") {
        return Ok(args);
    }
    loop {
        let (q, loc) = p.ident("a state name")?;
        states.push((q.clone(), loc));
        args.push(State::new(q));
        if p.eat(")") {
            return Ok(args);
        }
        p.expect(",")?;
    }
}

fn signed_int(p: &mut Parser) -> Result<num_bigint::BigInt> {
    let neg = p.eat("-");
    match p.peek() {
        Some(Tok::Int(k)) => {
            let k = if neg { -k.clone() } else { k.clone() };
            p.pos += 1;
            Ok(k)
        }
        _ => p.unexpected("an integer"),
    }
}

/// Term syntax: `+`, `-` and `*` with the usual precedence, applications
/// of declared symbols, `lub`/`glb`, integers, intervals and parentheses.
/// Other identifiers are variables when `vars` is set.
struct TermCtx<'a> {
    alphabet: &'a Alphabet,
    vars: bool,
}

fn parse_expr(p: &mut Parser, cx: &TermCtx<'_>) -> Result<Term> {
    let mut t = parse_product(p, cx)?;
    loop {
        let op = if p.eat("+") {
            BuiltinOp::Add
        } else if p.eat("-") {
            BuiltinOp::Sub
        } else {
            return Ok(t);
        };
        t = Term::op(op, t, parse_product(p, cx)?);
    }
}

fn parse_product(p: &mut Parser, cx: &TermCtx<'_>) -> Result<Term> {
    let mut t = parse_atom(p, cx)?;
    while p.eat("*") {
        t = Term::op(BuiltinOp::Mul, t, parse_atom(p, cx)?);
    }
    Ok(t)
}

fn parse_atom(p: &mut Parser, cx: &TermCtx<'_>) -> Result<Term> {
    let loc = p.loc();
    match p.peek().cloned() {
        Some(Tok::Int(_)) | Some(Tok::Punct("-")) => Ok(Term::Int(signed_int(p)?)),
        Some(Tok::Interval(v)) => {
            p.pos += 1;
            Ok(Term::Val(v))
        }
        Some(Tok::Punct("(")) => {
            p.pos += 1;
            let t = parse_expr(p, cx)?;
            p.expect(")")?;
            Ok(t)
        }
        Some(Tok::Ident(name)) => {
            p.pos += 1;
            let arity_error =
                |expected, found| SyntaxError { loc, kind: K::ArityMismatch { symbol: name.clone(), expected, found } };
            if p.eat("(") {
                let mut args = Vec::new();
                if !p.eat(")") {
                    loop {
                        args.push(parse_expr(p, cx)?);
                        if p.eat(")") {
                            break;
                        }
                        p.expect(",")?;
                    }
                }
                if let Some(k) = cx.alphabet.passive_arity(&name) {
                    if k != args.len() {
                        return Err(arity_error(k, args.len()));
                    }
                    return Ok(Term::app(name, args));
                }
                match BuiltinOp::from_name(&name) {
                    Some(op) if args.len() == op.arity() => Ok(Term::Op { op, args }),
                    Some(op) => Err(arity_error(op.arity(), args.len())),
                    None => Err(SyntaxError { loc, kind: K::UnknownSymbol(name) }),
                }
            } else {
                match cx.alphabet.passive_arity(&name) {
                    Some(0) => Ok(Term::constant(name)),
                    Some(k) => Err(arity_error(k, 0)),
                    None if cx.vars => Ok(Term::var(name)),
                    None => Err(SyntaxError { loc, kind: K::UnknownSymbol(name) }),
                }
            }
        }
        _ => p.unexpected("a term"),
    }
}

fn parse_relation(p: &mut Parser) -> Result<Relation> {
    let rel = match p.peek() {
        Some(Tok::Punct("==")) => Some(Relation::Eq),
        Some(Tok::Punct(s)) => Relation::from_symbol(s),
        _ => None,
    };
    match rel {
        Some(r) => {
            p.pos += 1;
            Ok(r)
        }
        None => p.unexpected("a comparison"),
    }
}

fn parse_conditions(p: &mut Parser, cx: &TermCtx<'_>) -> Result<Vec<Predicate>> {
    let mut out = Vec::new();
    if !p.eat("<=") {
        return Ok(out);
    }
    loop {
        let lhs = parse_expr(p, cx)?;
        let rel = parse_relation(p)?;
        let rhs = parse_expr(p, cx)?;
        out.push(Predicate::new(lhs, rel, rhs));
        let and = matches!(p.peek(), Some(Tok::Ident(w)) if w == "and");
        if !(p.eat(",") || p.eat("&&") || p.eat("/\\") || and) {
            return Ok(out);
        }
        if and {
            p.pos += 1;
        }
    }
}

fn parse_rule(p: &mut Parser, alphabet: &Alphabet) -> Result<RewriteRule> {
    let loc = p.loc();
    let cx = TermCtx { alphabet, vars: true };
    let lhs = parse_expr(p, &cx)?;
    p.expect("->")?;
    let rhs = parse_expr(p, &cx)?;
    let conditions = parse_conditions(p, &cx)?;
    RewriteRule::new(lhs, rhs, conditions).map_err(|e| SyntaxError { loc, kind: K::Rule(e) })
}

fn parse_equation(p: &mut Parser, alphabet: &Alphabet) -> Result<Equation> {
    let loc = p.loc();
    let cx = TermCtx { alphabet, vars: true };
    let lhs = parse_expr(p, &cx)?;
    p.expect("=")?;
    let rhs = parse_expr(p, &cx)?;
    let conditions = parse_conditions(p, &cx)?;
    Equation::new(lhs, rhs, conditions).map_err(|e| SyntaxError { loc, kind: K::Rule(e) })
}

/// Parses a ground term over `alphabet`; identifiers must be declared.
pub fn parse_term(src: &str, alphabet: &Alphabet) -> Result<Term> {
    let mut p = Parser::new(src)?;
    p.skip_separators();
    let t = parse_expr(&mut p, &TermCtx { alphabet, vars: false })?;
    p.skip_separators();
    if p.peek().is_some() {
        return p.unexpected("end of term");
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUNNING: &str = "\
lattice interval-int
symbols { f:1 cons:2 nil:0 }
automaton A0 {
  states q1 q2
  final q2
  [1,2] -> q1
  f(q1) -> q2
}
trs R {
  f(x) -> cons(x, f(x + 1)) <= x < 3
  f(x) -> cons(x, f(x + 2)) <= x > 2
}
equations E { x = x + 2 <= x >= 5 }
config { widen-after 3; strict-int }
";

    fn err(src: &str) -> SyntaxError {
        parse_spec(src).unwrap_err()
    }

    #[test]
    fn running_example() {
        let spec = parse_spec(RUNNING).unwrap();
        let (name, a) = spec.first_automaton().unwrap();
        assert_eq!(name, "A0");
        assert_eq!(a.to_string(), "final q2\n[1,2] -> q1\nf(q1) -> q2\n");
        let rules: Vec<String> = spec.trs[0].rules.iter().map(|r| r.to_string()).collect();
        assert_eq!(rules, ["f(x) -> cons(x, f(x + 1)) <= x < 3", "f(x) -> cons(x, f(x + 2)) <= x > 2"]);
        assert_eq!(spec.equations[0].equations[0].to_string(), "x = x + 2 <= x >= 5");
        assert_eq!(spec.config.widen_after, Some(3));
        assert!(spec.config.strict_int);
    }

    #[test]
    fn empty_file_lacks_lattice() {
        assert_eq!(err("").kind, K::MissingLattice);
        let e = err("\n# comment\nsymbols { f:1 }\n");
        assert_eq!((e.kind, e.loc), (K::MissingLattice, Loc { line: 3, col: 1 }));
    }

    #[test]
    fn duplicate_state_reports_both_locations() {
        let e = err("lattice interval-int\nautomaton A {\n  states q1 q2\n  states q1\n}\n");
        assert_eq!(e.loc, Loc { line: 4, col: 10 });
        assert_eq!(e.kind, K::DuplicateState { name: "q1".into(), first: Loc { line: 3, col: 10 } });
        assert_eq!(e.to_string(), "4:10: duplicate state `q1`, first declared at 3:10");
    }

    #[test]
    fn undeclared_state_is_rejected() {
        let e = err("lattice interval-int\nautomaton A {\n  states q1\n  [0,0] -> q2\n}\n");
        assert_eq!(e.kind, K::UndeclaredState("q2".into()));
        assert_eq!(e.loc, Loc { line: 4, col: 12 });
    }

    #[test]
    fn unknown_symbol_and_arity() {
        let e = err("lattice interval-int\nsymbols { f:1 }\nautomaton A {\n  g(q1) -> q2\n}\n");
        assert_eq!((e.kind, e.loc), (K::UnknownSymbol("g".into()), Loc { line: 4, col: 3 }));
        let e = err("lattice interval-int\nsymbols { f:1 }\nautomaton A {\n  f(q1, q1) -> q2\n}\n");
        assert_eq!(e.kind, K::ArityMismatch { symbol: "f".into(), expected: 1, found: 2 });
        let e = err("lattice interval-int\nsymbols { f:1 }\ntrs R { f(x, y) -> x }\n");
        assert_eq!(e.kind, K::ArityMismatch { symbol: "f".into(), expected: 1, found: 2 });
    }

    #[test]
    fn invalid_partition() {
        let e = err("lattice interval-int\npartition ]-inf,0] [0,+inf[\n");
        assert!(matches!(e.kind, K::InvalidPartition(_)));
        assert_eq!(e.loc, Loc { line: 2, col: 1 });
        let spec = parse_spec("lattice interval-int\npartition ]-inf,0[ [0,0] ]0,+inf[\n").unwrap();
        assert_eq!(spec.partition.unwrap().blocks().len(), 3);
    }

    #[test]
    fn transition_forms() {
        let spec = parse_spec(
            "lattice interval-int\nsymbols { a:0 }\nautomaton A {\n  a -> q0; 3 -> q1; -2 -> q1\n  +(q0,q1) -> q2\n  q1 * q1 -> q2\n  q2 -> q3\n  q[1,1] -> q{q2,q3}\n}\n",
        )
        .unwrap();
        let a = spec.automaton("A").unwrap();
        let text = a.to_string();
        for line in [
            "a -> q0",
            "[3,3] -> q1",
            "[-2,-2] -> q1",
            "+(q0,q1) -> q2",
            "*(q1,q1) -> q2",
            "q2 -> q3",
            "q[1,1] -> q{q2,q3}",
        ] {
            assert!(text.contains(line), "{line} missing from\n{text}");
        }
    }

    #[test]
    fn conditions_accept_several_separators() {
        let spec = parse_spec(
            "lattice interval-int\nsymbols { f:1 }\ntrs R {\n  f(x) -> f(x - 1) <= x > 0 && x != 5, x <= 9 and x >= -3 /\\ x == x\n}\n",
        )
        .unwrap();
        assert_eq!(spec.trs[0].rules[0].conditions.len(), 5);
    }

    #[test]
    fn rules_must_be_left_linear() {
        let e = err("lattice interval-int\nsymbols { g:2 }\ntrs R {\n  g(x, x) -> x\n}\n");
        assert!(matches!(e.kind, K::Rule(_)));
        assert_eq!(e.loc.line, 4);
    }

    #[test]
    fn builtins_restrict_the_alphabet() {
        let spec = parse_spec("lattice interval-int\nbuiltins { +:2 lub }\n").unwrap();
        assert!(spec.alphabet.has_builtin(BuiltinOp::Add));
        assert!(spec.alphabet.has_builtin(BuiltinOp::Lub));
        assert!(!spec.alphabet.has_builtin(BuiltinOp::Mul));
        let e = err("lattice interval-int\nbuiltins { +:3 }\n");
        assert!(matches!(e.kind, K::ArityMismatch { .. }));
    }

    #[test]
    fn ground_terms() {
        let alphabet = Alphabet::new([("cons", 2), ("nil", 0)]);
        let t = parse_term("cons([1,1], cons(2, nil))", &alphabet).unwrap();
        assert_eq!(t.to_string(), "cons([1,1], cons(2, nil))");
        assert!(matches!(parse_term("cons(x, nil)", &alphabet).unwrap_err().kind, K::UnknownSymbol(_)));
        assert!(parse_term("nil nil", &alphabet).is_err());
    }

    #[test]
    fn duplicate_names() {
        let e = err("lattice interval-int\nautomaton A {}\nautomaton A {}\n");
        assert_eq!(e.kind, K::DuplicateName { name: "A".into(), first: Loc { line: 2, col: 11 } });
    }
}
