//! Frame conditions: evaluating Horn clauses over a finite frame.
//!
//! Clause bodies are matched as conjunctive queries with an index nested-loop
//! join. The join order is greedy: start from the atom over the smallest
//! relation, then prefer atoms whose variables are already bound.

use super::structure::{KripkeStructure, WorldId};
use super::ModelError;
use crate::syntax::{Atom, FrameTheory, HornClause, RelIndex};

const UNBOUND: usize = usize::MAX;

#[derive(Debug, Clone, Default)]
struct RelationIndex {
    pairs: Vec<(WorldId, WorldId)>,
    succ: Vec<Vec<WorldId>>,
    pred: Vec<Vec<WorldId>>,
    member: Vec<bool>,
}

/// Adjacency and membership index over a frame, supporting LIFO insertion
/// and removal (the explicit solver undoes edges in reverse order).
#[derive(Debug, Clone)]
pub(crate) struct FrameIndex {
    worlds: usize,
    rels: Vec<RelationIndex>,
}

impl FrameIndex {
    pub(crate) fn new(worlds: usize, relations: usize) -> Self {
        let rel = RelationIndex {
            pairs: Vec::new(),
            succ: vec![Vec::new(); worlds],
            pred: vec![Vec::new(); worlds],
            member: vec![false; worlds * worlds],
        };
        FrameIndex {
            worlds,
            rels: vec![rel; relations],
        }
    }

    pub(crate) fn from_structure(s: &KripkeStructure) -> Self {
        let mut idx = FrameIndex::new(s.world_count(), s.relation_count());
        for (rel, u, v) in s.edges() {
            idx.insert(rel, u, v);
        }
        idx
    }

    pub(crate) fn world_count(&self) -> usize {
        self.worlds
    }

    pub(crate) fn contains(&self, rel: RelIndex, u: WorldId, v: WorldId) -> bool {
        self.rels[rel - 1].member[u * self.worlds + v]
    }

    /// Adds a pair; returns false when it was already present.
    pub(crate) fn insert(&mut self, rel: RelIndex, u: WorldId, v: WorldId) -> bool {
        let n = self.worlds;
        let r = &mut self.rels[rel - 1];
        if r.member[u * n + v] {
            return false;
        }
        r.member[u * n + v] = true;
        r.pairs.push((u, v));
        r.succ[u].push(v);
        r.pred[v].push(u);
        true
    }

    /// Removes the most recently inserted pair of `rel`.
    pub(crate) fn pop(&mut self, rel: RelIndex) -> Option<(WorldId, WorldId)> {
        let n = self.worlds;
        let r = &mut self.rels[rel - 1];
        let (u, v) = r.pairs.pop()?;
        r.member[u * n + v] = false;
        let s = r.succ[u].pop();
        let p = r.pred[v].pop();
        debug_assert_eq!((s, p), (Some(v), Some(u)));
        Some((u, v))
    }

    pub(crate) fn succ(&self, rel: RelIndex, u: WorldId) -> &[WorldId] {
        &self.rels[rel - 1].succ[u]
    }

    pub(crate) fn pred(&self, rel: RelIndex, v: WorldId) -> &[WorldId] {
        &self.rels[rel - 1].pred[v]
    }

    pub(crate) fn pairs(&self, rel: RelIndex) -> &[(WorldId, WorldId)] {
        &self.rels[rel - 1].pairs
    }

    pub(crate) fn len(&self, rel: RelIndex) -> usize {
        self.rels[rel - 1].pairs.len()
    }
}

/// Control flow for join enumeration callbacks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Flow {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Continue,
    Matched,
    Stop,
}

/// Greedy join order over the body atoms. `seed` forces an atom to come first.
pub(crate) fn join_order(
    frame: &FrameIndex,
    clause: &HornClause,
    seed: Option<(usize, usize)>,
) -> Vec<usize> {
    let mut bound = vec![false; clause.variables.len()];
    let mut remaining: Vec<usize> = (0..clause.body.len()).collect();
    let mut order = Vec::with_capacity(remaining.len());
    let size = |i: usize| match seed {
        Some((s, len)) if s == i => len,
        _ => frame.len(clause.body[i].rel),
    };
    while !remaining.is_empty() {
        let pick = if order.is_empty() && seed.is_some() {
            seed.map(|(s, _)| s).unwrap()
        } else {
            *remaining
                .iter()
                .min_by_key(|&&i| {
                    let a = clause.body[i];
                    let class = match (bound[a.from], bound[a.to]) {
                        (true, true) => 0,
                        (true, false) | (false, true) => 1,
                        (false, false) => 2,
                    };
                    (class, size(i), i)
                })
                .unwrap()
        };
        remaining.retain(|&i| i != pick);
        let a = clause.body[pick];
        bound[a.from] = true;
        bound[a.to] = true;
        order.push(pick);
    }
    order
}

/// Enumerates matches of a clause body.
///
/// `head_open` is consulted as soon as both head variables are bound; when it
/// returns false the branch is skipped. For each open head binding only the
/// first completing match is reported to `visit`, since any completion
/// witnesses the same head pair.
///
/// With `seed = Some((atom, pairs))` the given body atom ranges over `pairs`
/// instead of its full relation (semi-naive delta evaluation).
pub(crate) fn for_each_match(
    frame: &FrameIndex,
    clause: &HornClause,
    seed: Option<(usize, &[(WorldId, WorldId)])>,
    head_open: &mut dyn FnMut(WorldId, WorldId) -> bool,
    visit: &mut dyn FnMut(&[WorldId]) -> Flow,
) -> Flow {
    let order = join_order(frame, clause, seed.map(|(i, p)| (i, p.len())));
    let mut seen = vec![false; clause.variables.len()];
    let mut head_ready = order.len();
    for (depth, &i) in order.iter().enumerate() {
        let a = clause.body[i];
        seen[a.from] = true;
        seen[a.to] = true;
        if seen[clause.head.from] && seen[clause.head.to] {
            head_ready = depth + 1;
            break;
        }
    }
    let mut m = Matcher {
        frame,
        clause,
        order,
        seed,
        head_ready,
        binding: vec![UNBOUND; clause.variables.len()],
        head_open,
        visit,
    };
    match m.descend(0) {
        Step::Stop => Flow::Stop,
        _ => Flow::Continue,
    }
}

struct Matcher<'a, 'f> {
    frame: &'a FrameIndex,
    clause: &'a HornClause,
    order: Vec<usize>,
    seed: Option<(usize, &'a [(WorldId, WorldId)])>,
    head_ready: usize,
    binding: Vec<WorldId>,
    head_open: &'f mut dyn FnMut(WorldId, WorldId) -> bool,
    visit: &'f mut dyn FnMut(&[WorldId]) -> Flow,
}

impl Matcher<'_, '_> {
    fn descend(&mut self, depth: usize) -> Step {
        if depth == self.order.len() {
            return match (self.visit)(&self.binding) {
                Flow::Stop => Step::Stop,
                Flow::Continue => Step::Matched,
            };
        }
        let atom_ix = self.order[depth];
        let Atom { rel, from, to } = self.clause.body[atom_ix];
        let (bf, bt) = (self.binding[from], self.binding[to]);

        let seeded = match self.seed {
            Some((s, pairs)) if s == atom_ix => Some(pairs),
            _ => None,
        };

        // Candidate pairs for this atom under the current binding.
        let candidates: Vec<(WorldId, WorldId)> = if let Some(pairs) = seeded {
            pairs
                .iter()
                .copied()
                .filter(|&(u, v)| {
                    (bf == UNBOUND || bf == u) && (bt == UNBOUND || bt == v) && (from != to || u == v)
                })
                .collect()
        } else if bf != UNBOUND && bt != UNBOUND {
            if self.frame.contains(rel, bf, bt) {
                vec![(bf, bt)]
            } else {
                vec![]
            }
        } else if bf != UNBOUND {
            if from == to {
                unreachable!("a bound variable binds both ends")
            }
            self.frame.succ(rel, bf).iter().map(|&v| (bf, v)).collect()
        } else if bt != UNBOUND {
            self.frame.pred(rel, bt).iter().map(|&u| (u, bt)).collect()
        } else {
            self.frame
                .pairs(rel)
                .iter()
                .copied()
                .filter(|&(u, v)| from != to || u == v)
                .collect()
        };

        for (u, v) in candidates {
            let newly_from = self.binding[from] == UNBOUND;
            self.binding[from] = u;
            let newly_to = self.binding[to] == UNBOUND;
            self.binding[to] = v;

            let open = if depth + 1 == self.head_ready {
                let h = self.clause.head;
                (self.head_open)(self.binding[h.from], self.binding[h.to])
            } else {
                true
            };
            let step = if open {
                self.descend(depth + 1)
            } else {
                Step::Continue
            };

            if newly_to {
                self.binding[to] = UNBOUND;
            }
            if newly_from {
                self.binding[from] = UNBOUND;
            }
            match step {
                Step::Stop => return Step::Stop,
                Step::Matched if depth >= self.head_ready => return Step::Matched,
                _ => {}
            }
        }
        Step::Continue
    }
}

/// A clause instance that fails on the frame: body true, head false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub clause_index: usize,
    pub clause: HornClause,
    /// `(variable, world)` for every variable that occurs in an atom, in clause order.
    pub assignment: Vec<(String, String)>,
}

impl Violation {
    pub fn world_of(&self, var: &str) -> Option<&str> {
        self.assignment
            .iter()
            .find(|(v, _)| v == var)
            .map(|(_, w)| w.as_str())
    }
}

/// Outcome of checking a frame against a theory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameCheck {
    Holds,
    Violated(Violation),
}

impl FrameCheck {
    pub fn holds(&self) -> bool {
        matches!(self, FrameCheck::Holds)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            FrameCheck::Holds => None,
            FrameCheck::Violated(v) => Some(v),
        }
    }
}

pub(crate) fn check_theory_relations(
    relation_count: usize,
    theory: &FrameTheory,
) -> Result<(), ModelError> {
    let max = theory.max_relation();
    if max > relation_count {
        return Err(ModelError::RelationOutOfRange {
            index: max,
            count: relation_count,
        });
    }
    Ok(())
}

/// Checks every clause of `theory` on the frame of `structure`.
///
/// On failure reports the first violated clause (in theory order) together
/// with its lexicographically smallest violating assignment, comparing
/// assignments variable by variable in clause order and worlds by id.
pub fn check_frame_condition(
    structure: &KripkeStructure,
    theory: &FrameTheory,
) -> Result<FrameCheck, ModelError> {
    check_theory_relations(structure.relation_count(), theory)?;
    let frame = FrameIndex::from_structure(structure);
    for (ci, clause) in theory.clauses().iter().enumerate() {
        if clause_violated(&frame, clause) {
            let binding = lexmin_violation(&frame, clause)
                .expect("a violated clause has a violating assignment");
            let assignment = clause
                .used_variables()
                .into_iter()
                .map(|v| {
                    (
                        clause.variables[v].clone(),
                        structure.world_name(binding[v]).to_string(),
                    )
                })
                .collect();
            return Ok(FrameCheck::Violated(Violation {
                clause_index: ci,
                clause: clause.clone(),
                assignment,
            }));
        }
    }
    Ok(FrameCheck::Holds)
}

pub(crate) fn clause_violated(frame: &FrameIndex, clause: &HornClause) -> bool {
    let head = clause.head;
    let flow = for_each_match(
        frame,
        clause,
        None,
        &mut |u, v| !frame.contains(head.rel, u, v),
        &mut |_| Flow::Stop,
    );
    flow == Flow::Stop
}

/// Smallest violating assignment in variable-major lexicographic order, or
/// `None` if the clause holds. Variables not occurring in any atom stay unbound.
pub(crate) fn lexmin_violation(frame: &FrameIndex, clause: &HornClause) -> Option<Vec<WorldId>> {
    let vars = clause.used_variables();
    let mut binding = vec![UNBOUND; clause.variables.len()];
    if lexmin_step(frame, clause, &vars, 0, &mut binding) {
        Some(binding)
    } else {
        None
    }
}

fn lexmin_step(
    frame: &FrameIndex,
    clause: &HornClause,
    vars: &[usize],
    at: usize,
    binding: &mut Vec<WorldId>,
) -> bool {
    let head = clause.head;
    if at == vars.len() {
        return !frame.contains(head.rel, binding[head.from], binding[head.to]);
    }
    let var = vars[at];

    // Atoms linking `var` to itself or to an already bound variable.
    let mut best: Option<Vec<WorldId>> = None;
    for a in &clause.body {
        let list = if a.from == var && a.to != var && binding[a.to] != UNBOUND {
            Some(frame.pred(a.rel, binding[a.to]))
        } else if a.to == var && a.from != var && binding[a.from] != UNBOUND {
            Some(frame.succ(a.rel, binding[a.from]))
        } else {
            None
        };
        if let Some(list) = list {
            if best.as_ref().is_none_or(|b| list.len() < b.len()) {
                best = Some(list.to_vec());
            }
        }
    }
    let mut candidates = best.unwrap_or_else(|| (0..frame.world_count()).collect());
    candidates.sort_unstable();
    candidates.dedup();

    'next: for w in candidates {
        binding[var] = w;
        for a in &clause.body {
            let involves = a.from == var || a.to == var;
            if involves
                && binding[a.from] != UNBOUND
                && binding[a.to] != UNBOUND
                && !frame.contains(a.rel, binding[a.from], binding[a.to])
            {
                continue 'next;
            }
        }
        if (head.from == var || head.to == var)
            && binding[head.from] != UNBOUND
            && binding[head.to] != UNBOUND
            && frame.contains(head.rel, binding[head.from], binding[head.to])
        {
            continue;
        }
        if lexmin_step(frame, clause, vars, at + 1, binding) {
            return true;
        }
    }
    binding[var] = UNBOUND;
    false
}

/// `R_rel ∘ R_rel ⊆ R_rel`.
pub fn check_transitive(structure: &KripkeStructure, rel: RelIndex) -> Result<bool, ModelError> {
    structure.check_relation(rel)?;
    let frame = FrameIndex::from_structure(structure);
    Ok(frame.pairs(rel).iter().all(|&(a, b)| {
        frame
            .succ(rel, b)
            .iter()
            .all(|&c| frame.contains(rel, a, c))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_theory;

    fn chain(extra: bool) -> KripkeStructure {
        let mut s = KripkeStructure::new(["a", "b", "c"], 1).unwrap();
        s.add_edge(1, "a", "b").unwrap();
        s.add_edge(1, "b", "c").unwrap();
        if extra {
            s.add_edge(1, "a", "c").unwrap();
        }
        s
    }

    fn transitivity() -> FrameTheory {
        FrameTheory::new(0, 1, vec![HornClause::transitivity(1)]).unwrap()
    }

    #[test]
    fn open_chain_violates_transitivity() {
        let check = check_frame_condition(&chain(false), &transitivity()).unwrap();
        let v = check.violation().unwrap();
        assert_eq!(v.clause_index, 0);
        assert_eq!(
            v.assignment,
            vec![
                ("x".to_string(), "a".to_string()),
                ("y".to_string(), "b".to_string()),
                ("z".to_string(), "c".to_string())
            ]
        );
    }

    #[test]
    fn closed_chain_holds() {
        assert!(check_frame_condition(&chain(true), &transitivity())
            .unwrap()
            .holds());
    }

    #[test]
    fn transitivity_direct_check() {
        let empty = KripkeStructure::new(["a"], 1).unwrap();
        assert!(check_transitive(&empty, 1).unwrap());
        assert!(!check_transitive(&chain(false), 1).unwrap());
        assert!(check_transitive(&chain(true), 1).unwrap());
        assert_eq!(
            check_transitive(&empty, 2),
            Err(ModelError::RelationOutOfRange { index: 2, count: 1 })
        );
    }

    #[test]
    fn theory_index_out_of_range() {
        let th = parse_theory("sig 2 0; R2(x,y) -> R2(y,x)").unwrap();
        assert!(check_frame_condition(&chain(false), &th).is_err());
    }

    #[test]
    fn self_loop_atoms() {
        // R1(x,x), R1(x,y) -> R1(y,y)
        let th = parse_theory("sig 1 0; R1(x,x), R1(x,y) -> R1(y,y)").unwrap();
        let mut s = KripkeStructure::new(["a", "b"], 1).unwrap();
        s.add_edge(1, "a", "b").unwrap();
        assert!(check_frame_condition(&s, &th).unwrap().holds());
        s.add_edge(1, "a", "a").unwrap();
        let v = check_frame_condition(&s, &th).unwrap();
        assert_eq!(v.violation().unwrap().world_of("y"), Some("b"));
    }

    #[test]
    fn lifo_index_updates() {
        let mut idx = FrameIndex::new(3, 1);
        assert!(idx.insert(1, 0, 1));
        assert!(!idx.insert(1, 0, 1));
        assert!(idx.insert(1, 1, 2));
        assert_eq!(idx.pop(1), Some((1, 2)));
        assert!(!idx.contains(1, 1, 2));
        assert_eq!(idx.succ(1, 1), &[] as &[usize]);
        assert_eq!(idx.pairs(1), &[(0, 1)]);
    }

    #[test]
    fn join_order_prefers_connected_atoms() {
        let th = parse_theory("sig 2 0; R1(x,y), R2(z,w), R1(y,z) -> R1(x,w)").unwrap();
        let mut s = KripkeStructure::new(["a", "b", "c"], 2).unwrap();
        s.add_edge(1, "a", "b").unwrap();
        s.add_edge(1, "b", "c").unwrap();
        s.add_edge(2, "a", "b").unwrap();
        s.add_edge(2, "b", "c").unwrap();
        s.add_edge(2, "c", "a").unwrap();
        let frame = FrameIndex::from_structure(&s);
        // smallest relation R1 first, then the R1 atom sharing y, then R2
        assert_eq!(join_order(&frame, &th.clauses()[0], None), vec![0, 2, 1]);
    }
}
