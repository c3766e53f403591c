//! Linear first-order terms and plain term rewriting.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lattice::{is_identifier, Signature, SignatureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("position {position} is not in term {term}")]
    InvalidPosition { term: String, position: Position },
    #[error("symbol `{symbol}` expects {expected} arguments, got {found}")]
    Arity { symbol: String, expected: usize, found: usize },
    #[error("`{0}` is not a symbol of the signature")]
    UnknownSymbol(String),
    #[error("variable `{0}` occurs more than once")]
    NonLinear(String),
    #[error("left-hand side is a variable")]
    VariableLhs,
    #[error("right-hand side variable `{0}` does not occur on the left")]
    UnboundVariable(String),
    #[error("rule index {0} out of range")]
    NoSuchRule(usize),
    #[error("{0}")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrsParseError {
    #[error("line {line}: {source}")]
    Term { line: usize, source: TermError },
    #[error("line {line}: {source}")]
    Signature { line: usize, source: SignatureError },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(symbol.into(), args)
    }

    pub fn constant(symbol: impl Into<String>) -> Term {
        Term::App(symbol.into(), Vec::new())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// Variable occurrences, left to right.
    pub fn var_occurrences(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(x) => out.push(x),
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<&str> {
        self.var_occurrences().into_iter().collect()
    }

    /// Number of function-symbol occurrences.
    pub fn symbol_count(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::symbol_count).sum::<usize>(),
        }
    }

    /// Number of nodes, variables included.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// All positions in pre-order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        fn walk(t: &Term, here: &mut Vec<u32>, out: &mut Vec<Position>) {
            out.push(Position(here.clone()));
            if let Term::App(_, args) = t {
                for (i, a) in args.iter().enumerate() {
                    here.push(i as u32 + 1);
                    walk(a, here, out);
                    here.pop();
                }
            }
        }
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Checks arities and that every head is a declared symbol.
    pub fn check(&self, sig: &Signature) -> Result<(), TermError> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(f, args) => {
                let expected = sig.arity(f).ok_or_else(|| TermError::UnknownSymbol(f.clone()))?;
                if expected != args.len() {
                    return Err(TermError::Arity { symbol: f.clone(), expected, found: args.len() });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::App(s, args) if args.is_empty() => f.write_str(s),
            Term::App(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A path of 1-based argument indices; the empty path is the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<u32>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: u32) -> Position {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    pub fn concat(&self, other: &Position) -> Position {
        Position(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Neither position is a prefix of the other.
    pub fn is_parallel_to(&self, other: &Position) -> bool {
        !self.is_prefix_of(other) && !other.is_prefix_of(self)
    }
}

/// `eps` for the root, otherwise the indices concatenated (`21`), or
/// dot-separated when some index has more than one digit (`1.12`).
impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("eps");
        }
        let sep = if self.0.iter().any(|&i| i >= 10) { "." } else { "" };
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(sep))
    }
}

impl FromStr for Position {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TermError::Syntax(format!("malformed position `{s}`"));
        if s == "eps" || s == "ε" || s.is_empty() {
            return Ok(Position::root());
        }
        let parts: Vec<u32> = if s.contains('.') {
            s.split('.').map(|p| p.parse().map_err(|_| bad())).collect::<Result<_, _>>()?
        } else {
            s.chars().map(|c| c.to_digit(10).ok_or_else(bad)).collect::<Result<_, _>>()?
        };
        if parts.contains(&0) {
            return Err(bad());
        }
        Ok(Position(parts))
    }
}

pub type Substitution = BTreeMap<String, Term>;

/// Every variable occurs at most once.
pub fn is_linear(t: &Term) -> bool {
    repeated_variable(t).is_none()
}

fn repeated_variable(t: &Term) -> Option<&str> {
    let mut seen = BTreeSet::new();
    t.var_occurrences().into_iter().find(|x| !seen.insert(*x))
}

pub fn subterm_at<'a>(t: &'a Term, p: &Position) -> Result<&'a Term, TermError> {
    let mut cur = t;
    for &i in &p.0 {
        match cur {
            Term::App(_, args) if i >= 1 && (i as usize) <= args.len() => cur = &args[i as usize - 1],
            _ => return Err(TermError::InvalidPosition { term: t.to_string(), position: p.clone() }),
        }
    }
    Ok(cur)
}

/// `t` with the subterm at `p` replaced by `s`.
pub fn replace_at(t: &Term, p: &Position, s: Term) -> Result<Term, TermError> {
    fn go(t: &Term, path: &[u32], s: Term) -> Option<Term> {
        match path.split_first() {
            None => Some(s),
            Some((&i, rest)) => match t {
                Term::App(f, args) if i >= 1 && (i as usize) <= args.len() => {
                    let mut args = args.clone();
                    args[i as usize - 1] = go(&args[i as usize - 1], rest, s)?;
                    Some(Term::App(f.clone(), args))
                }
                _ => None,
            },
        }
    }
    go(t, &p.0, s).ok_or_else(|| TermError::InvalidPosition { term: t.to_string(), position: p.clone() })
}

pub fn apply_substitution(t: &Term, sigma: &Substitution) -> Term {
    match t {
        Term::Var(x) => sigma.get(x).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| apply_substitution(a, sigma)).collect()),
    }
}

/// Syntactic matching of a linear pattern.
pub fn match_pattern(pattern: &Term, t: &Term) -> Option<Substitution> {
    fn go(p: &Term, t: &Term, sigma: &mut Substitution) -> bool {
        match (p, t) {
            (Term::Var(x), _) => {
                let fresh = sigma.insert(x.clone(), t.clone()).is_none();
                assert!(fresh, "pattern variable `{x}` bound twice");
                true
            }
            (Term::App(f, ps), Term::App(g, ts)) => {
                f == g && ps.len() == ts.len() && ps.iter().zip(ts).all(|(p, t)| go(p, t, sigma))
            }
            _ => false,
        }
    }
    let mut sigma = Substitution::new();
    go(pattern, t, &mut sigma).then_some(sigma)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TrsRule {
    pub lhs: Term,
    pub rhs: Term,
}

impl TrsRule {
    pub fn new(lhs: Term, rhs: Term) -> Result<TrsRule, TermError> {
        if lhs.is_var() {
            return Err(TermError::VariableLhs);
        }
        for side in [&lhs, &rhs] {
            if let Some(x) = repeated_variable(side) {
                return Err(TermError::NonLinear(x.to_string()));
            }
        }
        let lvars = lhs.vars();
        if let Some(x) = rhs.vars().into_iter().find(|x| !lvars.contains(x)) {
            return Err(TermError::UnboundVariable(x.to_string()));
        }
        Ok(TrsRule { lhs, rhs })
    }
}

impl fmt::Display for TrsRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trs {
    pub signature: Signature,
    pub rules: Vec<TrsRule>,
}

impl Trs {
    pub fn new(signature: Signature, rules: Vec<TrsRule>) -> Result<Trs, TermError> {
        for r in &rules {
            r.lhs.check(&signature)?;
            r.rhs.check(&signature)?;
        }
        Ok(Trs { signature, rules })
    }

    pub fn rule(&self, i: usize) -> Result<&TrsRule, TermError> {
        self.rules.get(i).ok_or(TermError::NoSuchRule(i))
    }

    /// Parses a TRS from text:
    ///
    /// ```text
    /// sig f/2 g/1 a/0
    /// f(x, g(a)) -> g(x)
    /// ```
    ///
    /// Identifiers not declared with `sig` are variables.
    pub fn parse(text: &str) -> Result<Trs, TrsParseError> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let mut signature = Signature::new();
        for &(line, text) in &lines {
            let Some(decls) = text.strip_prefix("sig ").or(if text == "sig" { Some("") } else { None }) else {
                continue;
            };
            for decl in decls.split_whitespace() {
                let (sym, arity) = decl.split_once('/').ok_or_else(|| TrsParseError::Syntax {
                    line,
                    msg: format!("expected `symbol/arity`, got `{decl}`"),
                })?;
                let arity: usize = arity.parse().map_err(|_| TrsParseError::Syntax {
                    line,
                    msg: format!("bad arity in `{decl}`"),
                })?;
                signature.declare(sym, arity).map_err(|source| TrsParseError::Signature { line, source })?;
            }
        }
        let mut rules = Vec::new();
        for &(line, text) in &lines {
            if text == "sig" || text.starts_with("sig ") {
                continue;
            }
            let (l, r) = text.split_once("->").ok_or_else(|| TrsParseError::Syntax {
                line,
                msg: "expected `lhs -> rhs`".into(),
            })?;
            let term_err = |source| TrsParseError::Term { line, source };
            let lhs = parse_term(&signature, l).map_err(term_err)?;
            let rhs = parse_term(&signature, r).map_err(term_err)?;
            rules.push(TrsRule::new(lhs, rhs).map_err(term_err)?);
        }
        Ok(Trs { signature, rules })
    }
}

impl fmt::Display for Trs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.signature)?;
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Parses `f(x, g(a))`; identifiers outside the signature are variables.
pub fn parse_term(sig: &Signature, text: &str) -> Result<Term, TermError> {
    let mut p = Parser { chars: text.char_indices().peekable(), text };
    let t = p.term(sig)?;
    p.skip_ws();
    if let Some(&(i, c)) = p.chars.peek() {
        return Err(TermError::Syntax(format!("unexpected `{c}` at column {} in `{}`", i + 1, text.trim())));
    }
    Ok(t)
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.next_if(|(_, c)| c.is_whitespace()).is_some() {}
    }

    fn ident(&mut self) -> Result<String, TermError> {
        self.skip_ws();
        let mut s = String::new();
        while let Some((_, c)) = self.chars.next_if(|(_, c)| c.is_ascii_alphanumeric() || *c == '_') {
            s.push(c);
        }
        if !is_identifier(&s) {
            return Err(TermError::Syntax(format!("expected identifier in `{}`", self.text.trim())));
        }
        Ok(s)
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        self.chars.next_if(|(_, x)| *x == c).is_some()
    }

    fn term(&mut self, sig: &Signature) -> Result<Term, TermError> {
        let name = self.ident()?;
        let mut args = Vec::new();
        let has_parens = self.eat('(');
        if has_parens && !self.eat(')') {
            loop {
                args.push(self.term(sig)?);
                if self.eat(')') {
                    break;
                }
                if !self.eat(',') {
                    return Err(TermError::Syntax(format!("expected `,` or `)` in `{}`", self.text.trim())));
                }
            }
        }
        match sig.arity(&name) {
            Some(expected) if expected == args.len() => Ok(Term::App(name, args)),
            Some(expected) => Err(TermError::Arity { symbol: name, expected, found: args.len() }),
            None if has_parens => Err(TermError::UnknownSymbol(name)),
            None => Ok(Term::Var(name)),
        }
    }
}

/// Rewrites `t` at `p` with rule `rule_index`, if its left-hand side
/// matches there.
pub fn rewrite_at(trs: &Trs, t: &Term, rule_index: usize, p: &Position) -> Result<Option<Term>, TermError> {
    let rule = trs.rule(rule_index)?;
    let sub = subterm_at(t, p)?;
    match match_pattern(&rule.lhs, sub) {
        None => Ok(None),
        Some(sigma) => replace_at(t, p, apply_substitution(&rule.rhs, &sigma)).map(Some),
    }
}

/// All redexes in leftmost-innermost order: positions in post-order, and
/// rules in declaration order at each position.
pub fn all_redexes(trs: &Trs, t: &Term) -> Vec<(usize, Position)> {
    let mut out = Vec::new();
    fn walk(trs: &Trs, t: &Term, here: &mut Vec<u32>, out: &mut Vec<(usize, Position)>) {
        if let Term::App(_, args) = t {
            for (i, a) in args.iter().enumerate() {
                here.push(i as u32 + 1);
                walk(trs, a, here, out);
                here.pop();
            }
        }
        for (k, rule) in trs.rules.iter().enumerate() {
            if match_pattern(&rule.lhs, t).is_some() {
                out.push((k, Position(here.clone())));
            }
        }
    }
    walk(trs, t, &mut Vec::new(), &mut out);
    out
}

/// Leftmost-innermost reduction for at most `max_steps` steps. Returns
/// the reduction sequence, starting with `t`.
pub fn normalize(trs: &Trs, t: &Term, max_steps: usize) -> Vec<Term> {
    let mut seq = vec![t.clone()];
    for _ in 0..max_steps {
        let cur = seq.last().unwrap();
        let Some((k, p)) = all_redexes(trs, cur).into_iter().next() else {
            break;
        };
        let next = rewrite_at(trs, cur, k, &p).expect("redex position is valid").expect("redex matches");
        seq.push(next);
    }
    seq
}

/// Whether `s` rewrites to `t` in one step.
pub fn is_step(trs: &Trs, s: &Term, t: &Term) -> bool {
    all_redexes(trs, s)
        .into_iter()
        .any(|(k, p)| rewrite_at(trs, s, k, &p).ok().flatten().as_ref() == Some(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sig() -> Signature {
        Signature::from_pairs([("f", 3), ("g", 1), ("h", 1), ("a", 0), ("b", 0), ("c", 0)]).unwrap()
    }

    fn t(s: &str) -> Term {
        parse_term(&sig(), s).unwrap()
    }

    fn ab_trs() -> Trs {
        Trs::parse("sig a/1 b/1 c/0\na(b(x)) -> b(a(x))\n").unwrap()
    }

    #[test]
    fn linearity() {
        let s2 = Signature::from_pairs([("f", 2), ("g", 1), ("b", 0)]).unwrap();
        assert!(is_linear(&parse_term(&s2, "f(x, y)").unwrap()));
        assert!(!is_linear(&parse_term(&s2, "f(x, x)").unwrap()));
        assert!(is_linear(&t("f(x, g(b), y)")));
    }

    #[test]
    fn subterms() {
        let s = t("f(g(x), a, h(y))");
        assert_eq!(subterm_at(&s, &Position::root()).unwrap(), &s);
        assert_eq!(subterm_at(&s, &"1".parse().unwrap()).unwrap(), &t("g(x)"));
        assert_eq!(subterm_at(&s, &"31".parse().unwrap()).unwrap(), &Term::var("y"));
        assert!(matches!(subterm_at(&s, &"4".parse().unwrap()), Err(TermError::InvalidPosition { .. })));
        assert!(subterm_at(&s, &"21".parse().unwrap()).is_err());
    }

    #[test]
    fn substitution() {
        let sigma: Substitution = [("x".to_string(), t("a"))].into();
        assert_eq!(apply_substitution(&Term::var("x"), &sigma), t("a"));
        let s2 = Signature::from_pairs([("f", 2)]).unwrap();
        let fxy = parse_term(&s2, "f(x, y)").unwrap();
        assert_eq!(apply_substitution(&fxy, &Substitution::new()), fxy);
        let ab = ab_trs().signature;
        let sigma: Substitution = [("x".to_string(), parse_term(&ab, "b(y)").unwrap())].into();
        assert_eq!(
            apply_substitution(&parse_term(&ab, "a(b(x))").unwrap(), &sigma),
            parse_term(&ab, "a(b(b(y)))").unwrap()
        );
    }

    #[test]
    fn rewriting() {
        let trs = ab_trs();
        let p = |s: &str| parse_term(&trs.signature, s).unwrap();
        assert_eq!(rewrite_at(&trs, &p("a(b(c))"), 0, &Position::root()).unwrap(), Some(p("b(a(c))")));
        assert_eq!(rewrite_at(&trs, &p("b(a(c))"), 0, &Position::root()).unwrap(), None);

        let trs2 = Trs::parse("sig f/2 g/1 a/0 b/0 c/0\nf(x, y) -> f(a, y)\n").unwrap();
        let q = |s: &str| parse_term(&trs2.signature, s).unwrap();
        assert_eq!(
            rewrite_at(&trs2, &q("g(f(b, c))"), 0, &"1".parse().unwrap()).unwrap(),
            Some(q("g(f(a, c))"))
        );
        assert!(rewrite_at(&trs2, &q("g(f(b, c))"), 0, &"2".parse().unwrap()).is_err());
    }

    #[test]
    fn redexes_are_leftmost_innermost() {
        let trs = ab_trs();
        let s = parse_term(&trs.signature, "a(b(a(b(c))))").unwrap();
        assert_eq!(all_redexes(&trs, &s), vec![(0, "11".parse().unwrap()), (0, Position::root())]);
        assert!(all_redexes(&trs, &parse_term(&trs.signature, "b(a(c))").unwrap()).is_empty());
        let seq = normalize(&trs, &parse_term(&trs.signature, "a(a(b(c)))").unwrap(), 100);
        assert_eq!(seq.last().unwrap(), &parse_term(&trs.signature, "b(a(a(c)))").unwrap());
        assert_eq!(seq.len(), 3);
    }

    #[test]
    fn trs_parsing_errors() {
        let err = Trs::parse("sig f/2\nf(x, x) -> x\n").unwrap_err();
        assert_eq!(err, TrsParseError::Term { line: 2, source: TermError::NonLinear("x".into()) });
        assert!(err.to_string().contains("`x`"));
        let err = Trs::parse("sig f/2 a/0\n\nf(a) -> a\n").unwrap_err();
        assert!(matches!(err, TrsParseError::Term { line: 3, source: TermError::Arity { .. } }));
        assert!(matches!(Trs::parse("sig g/1\nx -> g(x)\n").unwrap_err(), TrsParseError::Term { source: TermError::VariableLhs, .. }));
        assert!(matches!(Trs::parse("sig g/1\ng(x) -> y\n").unwrap_err(), TrsParseError::Term { source: TermError::UnboundVariable(_), .. }));
        assert!(matches!(Trs::parse("sig 1/0\n").unwrap_err(), TrsParseError::Signature { line: 1, .. }));
        assert!(matches!(Trs::parse("sig g/1\ng(x)\n").unwrap_err(), TrsParseError::Syntax { line: 2, .. }));
        assert!(Trs::parse("sig a/0\n").unwrap().rules.is_empty());
    }

    #[test]
    fn trs_round_trip() {
        let trs = Trs::parse("sig a/0 b/0 f/3 g/1 h/2\nf(x, g(b), y) -> h(g(y), a)\n").unwrap();
        assert_eq!(Trs::parse(&trs.to_string()).unwrap(), trs);
        assert_eq!(trs.rules[0].to_string(), "f(x, g(b), y) -> h(g(y), a)");
    }

    #[test]
    fn position_names() {
        assert_eq!(Position::root().to_string(), "eps");
        assert_eq!(Position(vec![2, 1]).to_string(), "21");
        assert_eq!(Position(vec![1, 12]).to_string(), "1.12");
        assert_eq!("1.12".parse::<Position>().unwrap(), Position(vec![1, 12]));
        assert!("10".parse::<Position>().is_err());
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            Just(Term::constant("a")),
            Just(Term::constant("b")),
            (0u8..3).prop_map(|_| Term::var("_")),
        ];
        leaf.prop_recursive(4, 16, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|x| Term::app("g", vec![x])),
                (inner.clone(), inner.clone(), inner).prop_map(|(x, y, z)| Term::app("f", vec![x, y, z])),
            ]
        })
    }

    /// Gives every variable occurrence a distinct name.
    fn linearize(t: &Term, next: &mut usize) -> Term {
        match t {
            Term::Var(_) => {
                *next += 1;
                Term::var(format!("x{next}"))
            }
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| linearize(a, next)).collect()),
        }
    }

    proptest! {
        #[test]
        fn replacement_leaves_parallel_positions_untouched(raw in arb_term(), pick in any::<prop::sample::Index>()) {
            let s = linearize(&raw, &mut 0);
            let positions = s.positions();
            let p = pick.get(&positions).clone();
            let out = replace_at(&s, &p, Term::constant("c")).unwrap();
            prop_assert_eq!(subterm_at(&out, &p).unwrap(), &Term::constant("c"));
            for q in positions.iter().filter(|q| q.is_parallel_to(&p)) {
                prop_assert_eq!(subterm_at(&out, q).unwrap(), subterm_at(&s, q).unwrap());
            }
        }

        #[test]
        fn display_parse_round_trip(raw in arb_term()) {
            let s = linearize(&raw, &mut 0);
            prop_assert_eq!(parse_term(&sig(), &s.to_string()).unwrap(), s);
        }

        #[test]
        fn matching_instance_recovers_substitution(raw in arb_term(), inst in arb_term()) {
            let pat = linearize(&raw, &mut 0);
            let sigma: Substitution = pat.vars().into_iter().map(|x| (x.to_string(), linearize(&inst, &mut 100))).collect();
            let s = apply_substitution(&pat, &sigma);
            let found = match_pattern(&pat, &s).unwrap();
            prop_assert_eq!(found, sigma);
        }
    }
}
