//! Label lattices.
//!
//! Graph elements carry labels drawn from a complete lattice; morphisms may
//! only raise labels. The only lattice instantiated here is the flat lattice
//! over signature symbols and positive argument indices, with `⊥` below and
//! `⊤` above every base label.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A complete lattice. `join_all`/`meet_all` over the empty set are `⊥`/`⊤`.
pub trait CompleteLattice: Clone + Eq {
    fn bottom() -> Self;
    fn top() -> Self;
    fn leq(&self, other: &Self) -> bool;
    fn join(&self, other: &Self) -> Self;
    fn meet(&self, other: &Self) -> Self;

    fn join_all<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        Self: 'a,
    {
        items.into_iter().fold(Self::bottom(), |acc, x| acc.join(x))
    }

    fn meet_all<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        Self: 'a,
    {
        items.into_iter().fold(Self::top(), |acc, x| acc.meet(x))
    }
}

/// Payload of a base label: either a function symbol or a positive
/// argument index (the labels on argument edges of term encodings).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseLabel {
    Symbol(String),
    Index(u32),
}

/// Element of the flat lattice `(Σ ⊎ ℕ⁺)^{⊥,⊤}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Bottom,
    Base(BaseLabel),
    Top,
}

impl Label {
    pub fn symbol(name: impl Into<String>) -> Self {
        Label::Base(BaseLabel::Symbol(name.into()))
    }

    /// Argument-index label. Panics on zero; indices are positive.
    pub fn index(i: u32) -> Self {
        assert!(i > 0, "argument indices start at 1");
        Label::Base(BaseLabel::Index(i))
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            Label::Base(BaseLabel::Symbol(s)) => Some(s),
            _ => None,
        }
    }

    pub fn as_index(&self) -> Option<u32> {
        match self {
            Label::Base(BaseLabel::Index(i)) => Some(*i),
            _ => None,
        }
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Label::Top)
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Label::Bottom)
    }
}

impl CompleteLattice for Label {
    fn bottom() -> Self {
        Label::Bottom
    }

    fn top() -> Self {
        Label::Top
    }

    fn leq(&self, other: &Self) -> bool {
        match (self, other) {
            (Label::Bottom, _) | (_, Label::Top) => true,
            (a, b) => a == b,
        }
    }

    fn join(&self, other: &Self) -> Self {
        if self.leq(other) {
            other.clone()
        } else if other.leq(self) {
            self.clone()
        } else {
            Label::Top
        }
    }

    fn meet(&self, other: &Self) -> Self {
        if self.leq(other) {
            self.clone()
        } else if other.leq(self) {
            other.clone()
        } else {
            Label::Bottom
        }
    }
}

pub fn leq(a: &Label, b: &Label) -> bool {
    a.leq(b)
}

pub fn join<'a>(labels: impl IntoIterator<Item = &'a Label>) -> Label {
    Label::join_all(labels)
}

pub fn meet<'a>(labels: impl IntoIterator<Item = &'a Label>) -> Label {
    Label::meet_all(labels)
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Bottom => f.write_str("_|_"),
            Label::Top => f.write_str("^T^"),
            Label::Base(BaseLabel::Symbol(s)) => f.write_str(s),
            Label::Base(BaseLabel::Index(i)) => write!(f, "{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("empty label")]
    Empty,
    #[error("argument index must be positive: {0}")]
    ZeroIndex(String),
    #[error("malformed label `{0}`")]
    Malformed(String),
}

impl FromStr for Label {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "" => Err(LabelError::Empty),
            "_|_" => Ok(Label::Bottom),
            "^T^" => Ok(Label::Top),
            _ if s.bytes().all(|b| b.is_ascii_digit()) => match s.parse::<u32>() {
                Ok(0) => Err(LabelError::ZeroIndex(s.to_string())),
                Ok(i) => Ok(Label::index(i)),
                Err(_) => Err(LabelError::Malformed(s.to_string())),
            },
            _ if is_identifier(s) => Ok(Label::symbol(s)),
            _ => Err(LabelError::Malformed(s.to_string())),
        }
    }
}

/// Identifiers start with an ASCII letter and continue with letters, digits
/// or underscores. Purely numeric names are never identifiers, which keeps
/// symbols and argument indices disjoint.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("invalid symbol name `{0}`")]
    InvalidSymbol(String),
    #[error("symbol `{0}` declared twice")]
    Duplicate(String),
}

/// Function symbols with their arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    arities: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, symbol: &str, arity: usize) -> Result<(), SignatureError> {
        if !is_identifier(symbol) {
            return Err(SignatureError::InvalidSymbol(symbol.to_string()));
        }
        if self.arities.contains_key(symbol) {
            return Err(SignatureError::Duplicate(symbol.to_string()));
        }
        self.arities.insert(symbol.to_string(), arity);
        Ok(())
    }

    pub fn from_pairs<'a>(
        pairs: impl IntoIterator<Item = (&'a str, usize)>,
    ) -> Result<Self, SignatureError> {
        let mut sig = Signature::new();
        for (s, n) in pairs {
            sig.declare(s, n)?;
        }
        Ok(sig)
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.arities.get(symbol).copied()
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.arities.contains_key(symbol)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&str, usize)> {
        self.arities.iter().map(|(s, n)| (s.as_str(), *n))
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.arities.values().copied().max().unwrap_or(0)
    }

    /// Every label of `Σ°` that is relevant for this signature: `⊥`, `⊤`,
    /// the symbols, and the indices `1..=max_arity`.
    pub fn label_universe(&self) -> Vec<Label> {
        let mut out = vec![Label::Bottom, Label::Top];
        out.extend(self.arities.keys().map(Label::symbol));
        out.extend((1..=self.max_arity() as u32).map(Label::index));
        out
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("sig")?;
        for (s, n) in &self.arities {
            write!(f, " {s}/{n}")?;
        }
        Ok(())
    }
}
