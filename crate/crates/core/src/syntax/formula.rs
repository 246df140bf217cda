use std::collections::{BTreeSet, HashSet};
use std::fmt;

use ModalFormula as F;

/// Index of an accessibility relation. Relations are numbered from 1.
pub type RelIndex = usize;

/// A multimodal formula.
///
/// `Diamond(i, φ)` holds at a world when some `R_i`-successor satisfies `φ`;
/// `Box(i, φ)` holds when every `R_i`-successor does.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModalFormula {
    Var(String),
    Top,
    Bottom,
    Not(Box<ModalFormula>),
    And(Box<ModalFormula>, Box<ModalFormula>),
    Or(Box<ModalFormula>, Box<ModalFormula>),
    Implies(Box<ModalFormula>, Box<ModalFormula>),
    Iff(Box<ModalFormula>, Box<ModalFormula>),
    Diamond(RelIndex, Box<ModalFormula>),
    Box(RelIndex, Box<ModalFormula>),
}

impl ModalFormula {
    pub fn var(name: impl Into<String>) -> Self {
        F::Var(name.into())
    }

    pub fn not(f: Self) -> Self {
        F::Not(Box::new(f))
    }

    pub fn and(l: Self, r: Self) -> Self {
        F::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Self, r: Self) -> Self {
        F::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Self, r: Self) -> Self {
        F::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Self, r: Self) -> Self {
        F::Iff(Box::new(l), Box::new(r))
    }

    pub fn diamond(rel: RelIndex, f: Self) -> Self {
        F::Diamond(rel, Box::new(f))
    }

    pub fn boxed(rel: RelIndex, f: Self) -> Self {
        F::Box(rel, Box::new(f))
    }

    /// Left-nested conjunction; `Top` for an empty iterator.
    pub fn conj(items: impl IntoIterator<Item = Self>) -> Self {
        items.into_iter().reduce(Self::and).unwrap_or(F::Top)
    }

    /// Left-nested disjunction; `Bottom` for an empty iterator.
    pub fn disj(items: impl IntoIterator<Item = Self>) -> Self {
        items.into_iter().reduce(Self::or).unwrap_or(F::Bottom)
    }

    pub fn children(&self) -> Vec<&ModalFormula> {
        match self {
            F::Var(_) | F::Top | F::Bottom => vec![],
            F::Not(c) | F::Diamond(_, c) | F::Box(_, c) => vec![c],
            F::And(l, r) | F::Or(l, r) | F::Implies(l, r) | F::Iff(l, r) => vec![l, r],
        }
    }

    /// Number of AST nodes, `|φ|`.
    pub fn len(&self) -> usize {
        1 + self.children().iter().map(|c| c.len()).sum::<usize>()
    }

    /// Always false; every formula has at least one node.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest relation index mentioned, or 0 for a purely propositional formula.
    pub fn max_relation(&self) -> RelIndex {
        let own = match self {
            F::Diamond(i, _) | F::Box(i, _) => *i,
            _ => 0,
        };
        self.children()
            .iter()
            .map(|c| c.max_relation())
            .fold(own, usize::max)
    }

    pub fn propositions(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        if let F::Var(p) = self {
            out.insert(p.clone());
        }
        for c in self.children() {
            c.collect_props(out);
        }
    }

    /// All distinct subformulas, children before parents.
    pub fn subformulas(&self) -> Vec<ModalFormula> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.collect_subformulas(&mut seen, &mut out);
        out
    }

    fn collect_subformulas<'a>(
        &'a self,
        seen: &mut HashSet<&'a ModalFormula>,
        out: &mut Vec<ModalFormula>,
    ) {
        if seen.contains(self) {
            return;
        }
        for c in self.children() {
            c.collect_subformulas(seen, out);
        }
        seen.insert(self);
        out.push(self.clone());
    }

    fn precedence(&self) -> u8 {
        match self {
            F::Iff(..) => 1,
            F::Implies(..) => 2,
            F::Or(..) => 3,
            F::And(..) => 4,
            F::Not(_) | F::Diamond(..) | F::Box(..) => 5,
            F::Var(_) | F::Top | F::Bottom => 6,
        }
    }
}

/// All distinct subformulas of `formula`, children before parents.
pub fn subformulas(formula: &ModalFormula) -> Vec<ModalFormula> {
    formula.subformulas()
}

/// Prints in the concrete grammar accepted by [`crate::syntax::parse_formula`],
/// with the fewest parentheses that preserve the tree shape.
impl fmt::Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = self.precedence();
        let wrap = |f: &mut fmt::Formatter<'_>, child: &ModalFormula, paren: bool| {
            if paren {
                write!(f, "({child})")
            } else {
                write!(f, "{child}")
            }
        };
        match self {
            F::Var(name) => write!(f, "{name}"),
            F::Top => write!(f, "true"),
            F::Bottom => write!(f, "false"),
            F::Not(c) => {
                write!(f, "~")?;
                wrap(f, c, c.precedence() < prec)
            }
            F::Diamond(i, c) => {
                write!(f, "<{i}> ")?;
                wrap(f, c, c.precedence() < prec)
            }
            F::Box(i, c) => {
                write!(f, "[{i}] ")?;
                wrap(f, c, c.precedence() < prec)
            }
            F::And(l, r) | F::Or(l, r) | F::Iff(l, r) => {
                let op = match self {
                    F::And(..) => "&",
                    F::Or(..) => "|",
                    _ => "<->",
                };
                // left-associative
                wrap(f, l, l.precedence() < prec)?;
                write!(f, " {op} ")?;
                wrap(f, r, r.precedence() <= prec)
            }
            F::Implies(l, r) => {
                // right-associative
                wrap(f, l, l.precedence() <= prec)?;
                write!(f, " -> ")?;
                wrap(f, r, r.precedence() < prec)
            }
        }
    }
}
