use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::syntax::{FrameTheory, HornClause, RelIndex};

/// Reading of the `mid_i(u)` gadget, a two-step path out of `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum MidConvention {
    /// `u R_i s ∧ s R_i t`
    A,
    /// `u R_2 s ∧ s R_2 t` for every `i`
    #[default]
    B,
}

impl MidConvention {
    fn relation(self, i: RelIndex) -> RelIndex {
        match self {
            MidConvention::A => i,
            MidConvention::B => 2,
        }
    }
}

impl fmt::Display for MidConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MidConvention::A => "A",
            MidConvention::B => "B",
        })
    }
}

impl FromStr for MidConvention {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(MidConvention::A),
            "B" | "b" => Ok(MidConvention::B),
            other => Err(ConstructionError::UnknownOption(other.to_string())),
        }
    }
}

/// `x R_a y ∧ x R_a u ∧ u R_1 z ∧ mid_i(u) → y R_h z`
fn confluence(a: RelIndex, mid: RelIndex, head: RelIndex) -> HornClause {
    HornClause::from_named(
        &[
            (a, "x", "y"),
            (a, "x", "u"),
            (1, "u", "z"),
            (mid, "u", "s"),
            (mid, "s", "t"),
        ],
        (head, "y", "z"),
    )
}

/// The theory Φ over `n` free and `m` transitive relations.
pub fn build_phi(n: usize, m: usize, c: MidConvention) -> Result<FrameTheory, ConstructionError> {
    if n + m <= 1 {
        return Err(ConstructionError::Signature { n, m });
    }
    let mut clauses = vec![
        confluence(1, c.relation(2), 2),
        confluence(2, c.relation(1), 1),
    ];
    if n < 2 {
        clauses.push(HornClause::transitivity(2));
    }
    if n == 0 {
        clauses.push(HornClause::transitivity(1));
    }
    for i in 3..=n + m {
        if i > n {
            clauses.push(HornClause::transitivity(i));
        }
    }
    Ok(FrameTheory::new(n, m, clauses).expect("generated clauses fit the signature"))
}

/// The clause `x R_1 y ∧ x R_2 y ∧ z R_1 v → x R_1 v`.
pub fn root_clause() -> HornClause {
    HornClause::from_named(&[(1, "x", "y"), (2, "x", "y"), (1, "z", "v")], (1, "x", "v"))
}

/// Φ′: Φ extended by [`root_clause`].
pub fn build_phi_prime(
    n: usize,
    m: usize,
    c: MidConvention,
) -> Result<FrameTheory, ConstructionError> {
    let phi = build_phi(n, m, c)?;
    let mut clauses = phi.clauses().to_vec();
    clauses.push(root_clause());
    Ok(FrameTheory::new(n, m, clauses).expect("generated clauses fit the signature"))
}
