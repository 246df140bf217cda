//! Universal Horn frame theories.
//!
//! Text format:
//!
//! ```text
//! sig <n> <m>;
//! R1(x,y), R1(y,z) -> R1(x,z);
//! ```
//!
//! `n` counts unconstrained relations and `m` counts the trailing block of
//! transitive ones, so relation indices range over `1..=n+m`. The `;` after a
//! clause is optional. Variables are ordered by first occurrence.

use std::collections::HashMap;
use std::fmt;

use super::error::{ParseError, ParseErrorKind};
use super::formula::RelIndex;
use super::lexer::{Pos, Token, Tokens};

pub type VarId = usize;

/// A binary relational atom `x R_rel y` over clause variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub rel: RelIndex,
    pub from: VarId,
    pub to: VarId,
}

impl Atom {
    pub fn new(rel: RelIndex, from: VarId, to: VarId) -> Self {
        Atom { rel, from, to }
    }
}

/// `∀ variables. body_1 ∧ … ∧ body_k → head`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HornClause {
    pub variables: Vec<String>,
    pub body: Vec<Atom>,
    pub head: Atom,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TheoryError {
    #[error("relation index must be >= 1")]
    ZeroRelationIndex,
    #[error("relation index {index} exceeds signature {n}+{m}")]
    IndexExceedsSignature { index: usize, n: usize, m: usize },
    #[error("variable id {0} is out of range for the clause")]
    UnknownVariable(VarId),
    #[error("unsafe clause: head variable `{0}` does not occur in the body")]
    UnsafeHead(String),
}

impl HornClause {
    /// Builds a clause from atoms written with variable names, numbering the
    /// variables by first occurrence (body first, then head).
    pub fn from_named(body: &[(RelIndex, &str, &str)], head: (RelIndex, &str, &str)) -> Self {
        let mut variables: Vec<String> = Vec::new();
        let mut id = |name: &str| -> VarId {
            match variables.iter().position(|v| v == name) {
                Some(i) => i,
                None => {
                    variables.push(name.to_string());
                    variables.len() - 1
                }
            }
        };
        let body = body
            .iter()
            .map(|&(r, a, b)| Atom::new(r, id(a), id(b)))
            .collect();
        let head = Atom::new(head.0, id(head.1), id(head.2));
        HornClause {
            variables,
            body,
            head,
        }
    }

    /// `R_i(x,y), R_i(y,z) -> R_i(x,z)`.
    pub fn transitivity(rel: RelIndex) -> Self {
        Self::from_named(&[(rel, "x", "y"), (rel, "y", "z")], (rel, "x", "z"))
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().chain(std::iter::once(&self.head))
    }

    pub fn max_relation(&self) -> RelIndex {
        self.atoms().map(|a| a.rel).max().unwrap_or(0)
    }

    /// Variables that occur in at least one atom, in clause variable order.
    pub fn used_variables(&self) -> Vec<VarId> {
        (0..self.variables.len())
            .filter(|v| self.atoms().any(|a| a.from == *v || a.to == *v))
            .collect()
    }

    pub fn relations(&self) -> impl Iterator<Item = RelIndex> + '_ {
        self.atoms().map(|a| a.rel)
    }

    fn validate(&self, n: usize, m: usize) -> Result<(), TheoryError> {
        for a in self.atoms() {
            if a.rel == 0 {
                return Err(TheoryError::ZeroRelationIndex);
            }
            if a.rel > n + m {
                return Err(TheoryError::IndexExceedsSignature { index: a.rel, n, m });
            }
            for v in [a.from, a.to] {
                if v >= self.variables.len() {
                    return Err(TheoryError::UnknownVariable(v));
                }
            }
        }
        for v in [self.head.from, self.head.to] {
            if !self.body.iter().any(|a| a.from == v || a.to == v) {
                return Err(TheoryError::UnsafeHead(self.variables[v].clone()));
            }
        }
        Ok(())
    }

    fn write_atom(&self, f: &mut fmt::Formatter<'_>, a: &Atom) -> fmt::Result {
        write!(
            f,
            "R{}({},{})",
            a.rel, self.variables[a.from], self.variables[a.to]
        )
    }
}

impl fmt::Display for HornClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.body.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            self.write_atom(f, a)?;
        }
        if !self.body.is_empty() {
            write!(f, " ")?;
        }
        write!(f, "-> ")?;
        self.write_atom(f, &self.head)
    }
}

/// A set of safe Horn clauses over relations `R_1..R_{n+m}`, where the last
/// `m` relations are meant to be transitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameTheory {
    n: usize,
    m: usize,
    clauses: Vec<HornClause>,
}

impl FrameTheory {
    pub fn new(n: usize, m: usize, clauses: Vec<HornClause>) -> Result<Self, TheoryError> {
        for c in &clauses {
            c.validate(n, m)?;
        }
        Ok(FrameTheory { n, m, clauses })
    }

    pub fn empty(relations: usize) -> Self {
        FrameTheory {
            n: relations,
            m: 0,
            clauses: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn relation_count(&self) -> usize {
        self.n + self.m
    }

    /// Indices of the relations declared transitive: `n+1..=n+m`.
    pub fn transitive_block(&self) -> std::ops::RangeInclusive<RelIndex> {
        self.n + 1..=self.n + self.m
    }

    pub fn clauses(&self) -> &[HornClause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn max_relation(&self) -> RelIndex {
        self.clauses
            .iter()
            .map(HornClause::max_relation)
            .max()
            .unwrap_or(0)
    }

    /// The same theory with clauses in a different order.
    pub fn reordered(&self, order: &[usize]) -> Self {
        FrameTheory {
            n: self.n,
            m: self.m,
            clauses: order.iter().map(|&i| self.clauses[i].clone()).collect(),
        }
    }
}

impl fmt::Display for FrameTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sig {} {};", self.n, self.m)?;
        for c in &self.clauses {
            writeln!(f, "{c};")?;
        }
        Ok(())
    }
}

/// Parses a frame theory. Rejects negated atoms, disjunctive or multiple heads,
/// equality atoms, indices beyond the signature and unsafe heads.
pub fn parse_theory(text: &str) -> Result<FrameTheory, ParseError> {
    let mut t = Tokens::new(text)?;
    match t.next() {
        Some((Token::Ident(kw), _)) if kw == "sig" => {}
        _ => {
            return Err(t.error_at(
                Pos { line: 1, column: 1 },
                ParseErrorKind::Syntax("theory must start with `sig <n> <m>;`".into()),
            ))
        }
    }
    let n = int(&mut t)?;
    let m = int(&mut t)?;
    t.expect(&Token::Semi, "`;` after signature")?;

    let mut clauses = Vec::new();
    while t.peek().is_some() {
        if t.eat(&Token::Semi) {
            continue;
        }
        clauses.push(clause(&mut t, n, m)?);
    }
    Ok(FrameTheory { n, m, clauses })
}

fn int(t: &mut Tokens) -> Result<usize, ParseError> {
    match t.peek() {
        Some(&Token::Int(v)) => {
            t.next();
            Ok(v)
        }
        _ => Err(t.unexpected("an integer")),
    }
}

struct ClauseBuilder {
    variables: Vec<String>,
    first_seen: HashMap<String, Pos>,
}

impl ClauseBuilder {
    fn var(&mut self, name: String, pos: Pos) -> VarId {
        match self.variables.iter().position(|v| *v == name) {
            Some(i) => i,
            None => {
                self.first_seen.insert(name.clone(), pos);
                self.variables.push(name);
                self.variables.len() - 1
            }
        }
    }
}

fn clause(t: &mut Tokens, n: usize, m: usize) -> Result<HornClause, ParseError> {
    let mut b = ClauseBuilder {
        variables: Vec::new(),
        first_seen: HashMap::new(),
    };
    let mut body = Vec::new();
    if t.peek() != Some(&Token::Arrow) {
        loop {
            body.push(atom(t, &mut b, n, m)?);
            if t.eat(&Token::Comma) {
                continue;
            }
            match t.peek() {
                Some(Token::Arrow) => break,
                Some(Token::Pipe) => {
                    return Err(t.error(ParseErrorKind::NonHorn(
                        "disjunction is not allowed".into(),
                    )))
                }
                _ => return Err(t.unexpected("`,` or `->`")),
            }
        }
    }
    t.expect(&Token::Arrow, "`->`")?;
    let head_pos = t.pos();
    let head = atom(t, &mut b, n, m)?;
    match t.peek() {
        Some(Token::Comma) | Some(Token::Amp) => {
            return Err(t.error(ParseErrorKind::NonHorn(
                "more than one head atom".into(),
            )))
        }
        Some(Token::Pipe) => {
            return Err(t.error(ParseErrorKind::NonHorn(
                "disjunctive head".into(),
            )))
        }
        _ => {}
    }
    let clause = HornClause {
        variables: b.variables,
        body,
        head,
    };
    for v in [clause.head.from, clause.head.to] {
        if !clause.body.iter().any(|a| a.from == v || a.to == v) {
            let name = clause.variables[v].clone();
            let pos = b.first_seen.get(&name).copied().unwrap_or(head_pos);
            return Err(t.error_at(pos, ParseErrorKind::UnsafeHead(name)));
        }
    }
    Ok(clause)
}

fn atom(t: &mut Tokens, b: &mut ClauseBuilder, n: usize, m: usize) -> Result<Atom, ParseError> {
    let pos = t.pos();
    match t.peek().cloned() {
        Some(Token::Tilde) | Some(Token::Bang) => {
            return Err(t.error(ParseErrorKind::NonHorn("negated atom".into())))
        }
        Some(Token::Ident(word)) if word == "not" => {
            return Err(t.error(ParseErrorKind::NonHorn("negated atom".into())))
        }
        Some(Token::Ident(_)) if t.peek2() == Some(&Token::Eq) => {
            return Err(t.error(ParseErrorKind::Equality))
        }
        Some(Token::Ident(name)) => {
            t.next();
            let rel = relation_index(&name)
                .ok_or_else(|| t.error_at(pos, ParseErrorKind::Syntax(format!(
                    "expected a relation `R<i>`, found `{name}`"
                ))))?;
            if rel == 0 {
                return Err(t.error_at(pos, ParseErrorKind::ZeroRelationIndex));
            }
            if rel > n + m {
                return Err(t.error_at(
                    pos,
                    ParseErrorKind::IndexExceedsSignature { index: rel, n, m },
                ));
            }
            t.expect(&Token::LParen, "`(`")?;
            let from = variable(t, b)?;
            t.expect(&Token::Comma, "`,`")?;
            let to = variable(t, b)?;
            t.expect(&Token::RParen, "`)`")?;
            Ok(Atom::new(rel, from, to))
        }
        _ => Err(t.unexpected("a relational atom `R<i>(x,y)`")),
    }
}

fn variable(t: &mut Tokens, b: &mut ClauseBuilder) -> Result<VarId, ParseError> {
    let pos = t.pos();
    match t.next() {
        Some((Token::Ident(name), _)) => {
            if t.peek() == Some(&Token::Eq) {
                return Err(t.error_at(pos, ParseErrorKind::Equality));
            }
            Ok(b.var(name, pos))
        }
        _ => Err(t.error_at(
            pos,
            ParseErrorKind::Syntax("expected a variable".into()),
        )),
    }
}

fn relation_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('R')?;
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}
