//! Saturation of finite frames under Horn frame theories.
//!
//! The closure is the least fixpoint of the clauses read as rules. It is
//! computed semi-naively: after the first round, a clause is re-evaluated
//! only through joins in which some body atom ranges over the pairs derived
//! in the previous round.

use std::collections::{BTreeMap, HashSet};

use crate::semantics::frame::{check_theory_relations, for_each_match, FrameIndex, Flow};
use crate::semantics::{KripkeStructure, ModelError, WorldId};
use crate::syntax::{FrameTheory, RelIndex};

/// One pair added by saturation, with the clause instance that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub rel: RelIndex,
    pub from: String,
    pub to: String,
    pub clause_index: usize,
    /// `(variable, world)` for the variables of the clause, in clause order.
    pub assignment: Vec<(String, String)>,
    /// Fixpoint round in which the pair was first derived (0-based).
    pub round: usize,
}

impl std::fmt::Display for Derivation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "R{}({}, {}) by clause {} [",
            self.rel,
            self.from,
            self.to,
            self.clause_index + 1
        )?;
        for (i, (v, w)) in self.assignment.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}={w}")?;
        }
        write!(f, "] round {}", self.round)
    }
}

#[derive(Debug, Clone)]
pub struct Saturation {
    pub structure: KripkeStructure,
    /// Added pairs in derivation order.
    pub derivations: Vec<Derivation>,
    pub rounds: usize,
}

impl Saturation {
    pub fn added(&self) -> usize {
        self.derivations.len()
    }

    pub fn derivation_of(&self, rel: RelIndex, from: &str, to: &str) -> Option<&Derivation> {
        self.derivations
            .iter()
            .find(|d| d.rel == rel && d.from == from && d.to == to)
    }
}

struct Pending {
    rel: RelIndex,
    from: WorldId,
    to: WorldId,
    clause_index: usize,
    binding: Vec<WorldId>,
}

/// Least extension of the relations of `structure` closed under `theory`.
/// Worlds and valuation are unchanged.
pub fn saturate(structure: &KripkeStructure, theory: &FrameTheory) -> Result<Saturation, ModelError> {
    check_theory_relations(structure.relation_count(), theory)?;
    let mut frame = FrameIndex::from_structure(structure);
    let mut out = structure.clone();
    let mut derivations = Vec::new();
    let rel_count = structure.relation_count();

    // None = first round: evaluate every clause in full.
    let mut delta: Option<Vec<Vec<(WorldId, WorldId)>>> = None;
    let mut round = 0;
    loop {
        let mut pending: Vec<Pending> = Vec::new();
        let mut fresh: HashSet<(RelIndex, WorldId, WorldId)> = HashSet::new();
        for (ci, clause) in theory.clauses().iter().enumerate() {
            let head = clause.head;
            let seeds: Vec<Option<usize>> = match &delta {
                None => vec![None],
                Some(d) => (0..clause.body.len())
                    .filter(|&j| !d[clause.body[j].rel - 1].is_empty())
                    .map(Some)
                    .collect(),
            };
            for seed in seeds {
                let seed_pairs = seed.map(|j| {
                    let d = delta.as_ref().expect("seeded rounds have a delta");
                    (j, d[clause.body[j].rel - 1].as_slice())
                });
                let fresh_cell = std::cell::RefCell::new(&mut fresh);
                let mut open = |u: WorldId, v: WorldId| {
                    !frame.contains(head.rel, u, v)
                        && !fresh_cell.borrow().contains(&(head.rel, u, v))
                };
                let mut visit = |b: &[WorldId]| {
                    let (u, v) = (b[head.from], b[head.to]);
                    if fresh_cell.borrow_mut().insert((head.rel, u, v)) {
                        pending.push(Pending {
                            rel: head.rel,
                            from: u,
                            to: v,
                            clause_index: ci,
                            binding: b.to_vec(),
                        });
                    }
                    Flow::Continue
                };
                for_each_match(&frame, clause, seed_pairs, &mut open, &mut visit);
            }
        }

        // Keep the first derivation of each pair.
        let mut next = vec![Vec::new(); rel_count];
        for p in pending {
            if frame.insert(p.rel, p.from, p.to) {
                next[p.rel - 1].push((p.from, p.to));
                out.add_edge_ids(p.rel, p.from, p.to)
                    .expect("indices come from the structure");
                let clause = &theory.clauses()[p.clause_index];
                derivations.push(Derivation {
                    rel: p.rel,
                    from: structure.world_name(p.from).to_string(),
                    to: structure.world_name(p.to).to_string(),
                    clause_index: p.clause_index,
                    assignment: clause
                        .used_variables()
                        .into_iter()
                        .map(|v| {
                            (
                                clause.variables[v].clone(),
                                structure.world_name(p.binding[v]).to_string(),
                            )
                        })
                        .collect(),
                    round,
                });
            }
        }
        round += 1;
        if next.iter().all(Vec::is_empty) {
            break;
        }
        delta = Some(next);
    }
    Ok(Saturation {
        structure: out,
        derivations,
        rounds: round,
    })
}

/// True iff saturation adds nothing.
pub fn is_closed(structure: &KripkeStructure, theory: &FrameTheory) -> Result<bool, ModelError> {
    check_theory_relations(structure.relation_count(), theory)?;
    let frame = FrameIndex::from_structure(structure);
    Ok(theory
        .clauses()
        .iter()
        .all(|c| !crate::semantics::frame::clause_violated(&frame, c)))
}

/// Added pairs grouped by relation, for reporting.
pub fn delta_by_relation(sat: &Saturation) -> BTreeMap<RelIndex, Vec<(String, String)>> {
    let mut map: BTreeMap<RelIndex, Vec<(String, String)>> = BTreeMap::new();
    for d in &sat.derivations {
        map.entry(d.rel)
            .or_default()
            .push((d.from.clone(), d.to.clone()));
    }
    map
}
