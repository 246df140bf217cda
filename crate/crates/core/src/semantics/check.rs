use std::collections::HashMap;

use super::structure::{KripkeStructure, WorldId};
use super::ModelError;
use crate::syntax::ModalFormula;

/// Truth of every subformula of a formula at every world of a structure.
///
/// Built bottom-up over the subformula list, so the cost is
/// `O(|φ| · (|M| + Σ|R_i|))`.
#[derive(Debug, Clone)]
pub struct Evaluation {
    subformulas: Vec<ModalFormula>,
    truth: Vec<Vec<bool>>,
}

impl Evaluation {
    pub fn new(structure: &KripkeStructure, formula: &ModalFormula) -> Result<Self, ModelError> {
        let rel = formula.max_relation();
        if rel > structure.relation_count() {
            return Err(ModelError::RelationOutOfRange {
                index: rel,
                count: structure.relation_count(),
            });
        }
        let subformulas = formula.subformulas();
        let position: HashMap<&ModalFormula, usize> =
            subformulas.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let n = structure.world_count();
        let mut truth: Vec<Vec<bool>> = Vec::with_capacity(subformulas.len());
        for f in &subformulas {
            let row = |g: &ModalFormula| &truth[position[g]];
            let value: Vec<bool> = match f {
                ModalFormula::Var(p) => (0..n).map(|w| structure.labels(w).contains(p)).collect(),
                ModalFormula::Top => vec![true; n],
                ModalFormula::Bottom => vec![false; n],
                ModalFormula::Not(c) => row(c).iter().map(|b| !b).collect(),
                ModalFormula::And(l, r) => zip(row(l), row(r), |a, b| a && b),
                ModalFormula::Or(l, r) => zip(row(l), row(r), |a, b| a || b),
                ModalFormula::Implies(l, r) => zip(row(l), row(r), |a, b| !a || b),
                ModalFormula::Iff(l, r) => zip(row(l), row(r), |a, b| a == b),
                ModalFormula::Diamond(i, c) => {
                    let child = row(c);
                    let mut out = vec![false; n];
                    for &(u, v) in structure.relation(*i) {
                        if child[v] {
                            out[u] = true;
                        }
                    }
                    out
                }
                ModalFormula::Box(i, c) => {
                    let child = row(c);
                    let mut out = vec![true; n];
                    for &(u, v) in structure.relation(*i) {
                        if !child[v] {
                            out[u] = false;
                        }
                    }
                    out
                }
            };
            truth.push(value);
        }
        Ok(Evaluation { subformulas, truth })
    }

    /// Truth of the evaluated (top-level) formula at `w`.
    pub fn holds_at(&self, w: WorldId) -> bool {
        self.truth.last().expect("formula has a node")[w]
    }

    pub fn holds_everywhere(&self) -> bool {
        self.truth.last().expect("formula has a node").iter().all(|&b| b)
    }

    /// Worlds where the formula is true.
    pub fn satisfying_worlds(&self) -> Vec<WorldId> {
        let top = self.truth.last().expect("formula has a node");
        (0..top.len()).filter(|&w| top[w]).collect()
    }

    pub fn type_at(&self, w: WorldId) -> TypeSet {
        TypeSet {
            members: self
                .subformulas
                .iter()
                .zip(&self.truth)
                .filter(|(_, t)| t[w])
                .map(|(f, _)| f.clone())
                .collect(),
        }
    }
}

fn zip(a: &[bool], b: &[bool], op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.iter().zip(b).map(|(&x, &y)| op(x, y)).collect()
}

/// The subformulas of a fixed formula that are true at a fixed world,
/// in subformula order (children before parents).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeSet {
    members: Vec<ModalFormula>,
}

impl TypeSet {
    pub fn contains(&self, f: &ModalFormula) -> bool {
        self.members.contains(f)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ModalFormula> {
        self.members.iter()
    }
}

/// `𝔐, w ⊨ φ`.
pub fn check_local(
    structure: &KripkeStructure,
    world: &str,
    formula: &ModalFormula,
) -> Result<bool, ModelError> {
    let w = structure.world_id(world)?;
    Ok(Evaluation::new(structure, formula)?.holds_at(w))
}

/// `𝔐 ⊨ φ`: the formula holds at every world.
pub fn check_global(structure: &KripkeStructure, formula: &ModalFormula) -> Result<bool, ModelError> {
    Ok(Evaluation::new(structure, formula)?.holds_everywhere())
}

/// The type of `world` with respect to `formula`.
pub fn type_of(
    structure: &KripkeStructure,
    world: &str,
    formula: &ModalFormula,
) -> Result<TypeSet, ModelError> {
    let w = structure.world_id(world)?;
    Ok(Evaluation::new(structure, formula)?.type_at(w))
}
