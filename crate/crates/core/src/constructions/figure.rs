use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::grid::{grid_model, parse_grid_world, Decoding, GridModelSpec, Topology};
use super::phi::{build_phi, build_phi_prime, MidConvention};
use super::ConstructionError;
use crate::chase::saturate;
use crate::semantics::frame::FrameIndex;
use crate::semantics::{check_frame_condition, FrameCheck, KripkeStructure};
use crate::syntax::FrameTheory;

const SIGNATURES: [(usize, usize); 3] = [(2, 0), (1, 1), (0, 2)];

#[derive(Debug, Clone, Serialize)]
pub struct DerivedPair {
    pub relation: usize,
    pub from: String,
    pub to: String,
    pub clause: usize,
    pub assignment: Vec<(String, String)>,
    pub round: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoryReport {
    pub label: String,
    pub n: usize,
    pub m: usize,
    pub prime: bool,
    pub model: bool,
    /// 1-based clause number of the first violated clause.
    pub violated_clause: Option<usize>,
    pub witness: Vec<(String, String)>,
    /// Pairs added by saturation when the grid is not closed.
    pub delta: Vec<DerivedPair>,
    /// Same-relation 2-step paths in the saturated frame, per relation.
    pub two_paths_after_saturation: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureReport {
    pub k: usize,
    pub topology: Topology,
    pub convention: MidConvention,
    pub decoding: Decoding,
    pub worlds: usize,
    pub edges: usize,
    pub theories: Vec<TheoryReport>,
    /// Every world has successors in at most one relation.
    pub single_relation_out_edges: bool,
    /// Same-relation paths `a → b → c`, per relation.
    pub two_paths: BTreeMap<usize, Vec<[String; 3]>>,
    /// Longest same-relation path per relation; `None` when the relation has a cycle.
    pub longest_path: BTreeMap<usize, Option<usize>>,
    /// Every 2-step path is `U_{x,y} → S_{x,y} → T_{x,y}`.
    pub only_gadget_paths: bool,
    /// No world has an R1 and an R2 edge to the same target.
    pub clause5_inert: bool,
    pub notes: Vec<String>,
}

impl FigureReport {
    pub fn all_models(&self) -> bool {
        self.theories.iter().all(|t| t.model)
    }

    pub fn theory(&self, label: &str) -> Option<&TheoryReport> {
        self.theories.iter().find(|t| t.label == label)
    }
}

/// Same-relation 2-step paths `(a, b, c)` with `a R b R c`.
pub fn two_step_paths(s: &KripkeStructure, rel: usize) -> Vec<[String; 3]> {
    let frame = FrameIndex::from_structure(s);
    let mut out = Vec::new();
    for &(a, b) in s.relation(rel) {
        let mut next = frame.succ(rel, b).to_vec();
        next.sort_unstable();
        for c in next {
            out.push([
                s.world_name(a).to_string(),
                s.world_name(b).to_string(),
                s.world_name(c).to_string(),
            ]);
        }
    }
    out
}

/// Length (in edges) of the longest path in one relation, or `None` on a cycle.
pub fn longest_path(s: &KripkeStructure, rel: usize) -> Option<usize> {
    let n = s.world_count();
    let frame = FrameIndex::from_structure(s);
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    let mut best = vec![0usize; n];
    fn visit(
        w: usize,
        rel: usize,
        frame: &FrameIndex,
        state: &mut [u8],
        best: &mut [usize],
    ) -> bool {
        state[w] = 1;
        let mut len = 0;
        for &v in frame.succ(rel, w) {
            match state[v] {
                1 => return false,
                0 => {
                    if !visit(v, rel, frame, state, best) {
                        return false;
                    }
                }
                _ => {}
            }
            len = len.max(best[v] + 1);
        }
        best[w] = len;
        state[w] = 2;
        true
    }
    for w in 0..n {
        if state[w] == 0 && !visit(w, rel, &frame, &mut state, &mut best) {
            return None;
        }
    }
    Some(best.into_iter().max().unwrap_or(0))
}

fn single_relation_out_edges(s: &KripkeStructure) -> bool {
    let mut used: Vec<Option<usize>> = vec![None; s.world_count()];
    for (rel, u, _) in s.edges() {
        match used[u] {
            Some(r) if r != rel => return false,
            _ => used[u] = Some(rel),
        }
    }
    true
}

fn check_theory(
    grid: &KripkeStructure,
    theory: &FrameTheory,
    label: String,
    prime: bool,
) -> TheoryReport {
    let check = check_frame_condition(grid, theory).expect("grid has two relations");
    let mut report = TheoryReport {
        label,
        n: theory.n(),
        m: theory.m(),
        prime,
        model: check.holds(),
        violated_clause: None,
        witness: Vec::new(),
        delta: Vec::new(),
        two_paths_after_saturation: BTreeMap::new(),
    };
    if let FrameCheck::Violated(v) = check {
        report.violated_clause = Some(v.clause_index + 1);
        report.witness = v.assignment;
        let sat = saturate(grid, theory).expect("grid has two relations");
        report.delta = sat
            .derivations
            .into_iter()
            .map(|d| DerivedPair {
                relation: d.rel,
                from: d.from,
                to: d.to,
                clause: d.clause_index + 1,
                assignment: d.assignment,
                round: d.round,
            })
            .collect();
        for rel in 1..=2 {
            report
                .two_paths_after_saturation
                .insert(rel, two_step_paths(&sat.structure, rel).len());
        }
    }
    report
}

/// Checks the grid model against Φ and Φ′ for the three two-relation
/// signatures and collects the path statistics of the construction.
pub fn verify_figure(
    k: usize,
    convention: MidConvention,
    decoding: Decoding,
    topology: Topology,
) -> Result<FigureReport, ConstructionError> {
    let spec = GridModelSpec {
        k,
        topology,
        decoding,
    };
    let grid = grid_model(&spec)?;
    let mut theories = Vec::new();
    for prime in [false, true] {
        for (n, m) in SIGNATURES {
            let (theory, name) = if prime {
                (build_phi_prime(n, m, convention)?, "Phi'")
            } else {
                (build_phi(n, m, convention)?, "Phi")
            };
            theories.push(check_theory(&grid, &theory, format!("{name}({n},{m})"), prime));
        }
    }

    let mut two_paths = BTreeMap::new();
    let mut longest = BTreeMap::new();
    let mut only_gadget_paths = true;
    for rel in 1..=2 {
        let paths = two_step_paths(&grid, rel);
        for [a, b, c] in &paths {
            let gadget = match (parse_grid_world(a), parse_grid_world(b), parse_grid_world(c)) {
                (Some(('U', x0, y0)), Some(('S', x1, y1)), Some(('T', x2, y2))) => {
                    (x0, y0) == (x1, y1) && (x1, y1) == (x2, y2)
                }
                _ => false,
            };
            only_gadget_paths &= gadget;
        }
        two_paths.insert(rel, paths);
        longest.insert(rel, longest_path(&grid, rel));
    }

    let clause5_inert = grid.relation(1).is_disjoint(grid.relation(2));
    let mut notes = Vec::new();
    if clause5_inert {
        notes.push(
            "clause 5 is inert here: no world reaches one target by both R1 and R2".to_string(),
        );
    }
    notes.push(
        "clause 5 fires only on a common R1/R2 successor; <1>true & <2>true allows distinct successors, so the root is not forced to reach every world".to_string(),
    );

    Ok(FigureReport {
        k,
        topology,
        convention,
        decoding,
        worlds: grid.world_count(),
        edges: grid.edge_count(),
        theories,
        single_relation_out_edges: single_relation_out_edges(&grid),
        two_paths,
        longest_path: longest,
        only_gadget_paths,
        clause5_inert,
        notes,
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl fmt::Display for FigureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "grid: {} k={}, decoding {}, worlds: {}, edges: {}",
            self.topology, self.k, self.decoding, self.worlds, self.edges
        )?;
        for t in &self.theories {
            write!(f, "{} [{}]: model: {}", t.label, self.convention, yes(t.model))?;
            if let Some(c) = t.violated_clause {
                write!(f, " (clause {c} violated:")?;
                for (v, w) in &t.witness {
                    write!(f, " {v}={w}")?;
                }
                write!(f, ")")?;
            }
            writeln!(f)?;
            if !t.delta.is_empty() {
                writeln!(f, "  chase adds {} pairs:", t.delta.len())?;
                for d in &t.delta {
                    write!(
                        f,
                        "    R{}({}, {}) by clause {} [",
                        d.relation, d.from, d.to, d.clause
                    )?;
                    for (i, (v, w)) in d.assignment.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{v}={w}")?;
                    }
                    writeln!(f, "] round {}", d.round)?;
                }
                for (rel, n) in &t.two_paths_after_saturation {
                    writeln!(f, "  2-step R{rel} paths after saturation: {n}")?;
                }
            }
        }
        writeln!(
            f,
            "single-relation out-edges: {}",
            yes(self.single_relation_out_edges)
        )?;
        for (rel, paths) in &self.two_paths {
            let longest = match self.longest_path[rel] {
                Some(n) => n.to_string(),
                None => "unbounded (cycle)".to_string(),
            };
            writeln!(
                f,
                "R{rel}: 2-step paths: {}, longest path: {longest}",
                paths.len()
            )?;
        }
        writeln!(
            f,
            "only U->S->T 2-step paths: {}",
            yes(self.only_gadget_paths)
        )?;
        writeln!(f, "clause 5 inert: {}", yes(self.clause5_inert))?;
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}
