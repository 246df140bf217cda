//! Bounded finite-model search.
//!
//! Domain sizes are tried in increasing order up to `max_worlds`. For each
//! size one of two engines decides whether a model of that size exists:
//!
//! - [`Engine::Explicit`] searches over partial structures with three-valued
//!   propagation and the chase, branching only on open obligations and
//!   treating untouched worlds as interchangeable.
//! - [`Engine::Propositional`] grounds the problem into clauses and runs a
//!   [`SatBackend`], adding frame clause instances on demand.
//!
//! Results are checked with [`certify`], which only uses the semantics module.

mod cdcl;
mod dag;
mod explicit;
mod propositional;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use cdcl::{Cdcl, Lit, SatBackend, SatResult, Var};

use crate::semantics::{check_frame_condition, check_global, check_local, KripkeStructure};
use crate::syntax::{FrameTheory, ModalFormula};
use dag::Dag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Local,
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Explicit,
    Propositional,
}

impl FromStr for Mode {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "local" => Ok(Mode::Local),
            "global" => Ok(Mode::Global),
            other => Err(SolverError::InvalidConfig(format!("unknown mode `{other}`"))),
        }
    }
}

impl FromStr for Engine {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "explicit" => Ok(Engine::Explicit),
            "propositional" => Ok(Engine::Propositional),
            other => Err(SolverError::InvalidConfig(format!("unknown engine `{other}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Local => "local",
            Mode::Global => "global",
        })
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Explicit => "explicit",
            Engine::Propositional => "propositional",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub max_worlds: usize,
    pub mode: Mode,
    /// Time budget in seconds.
    pub budget: f64,
    /// Tie-breaking seed for the propositional engine's variable order.
    pub seed: u64,
    pub engine: Engine,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_worlds: 4,
            mode: Mode::Local,
            budget: 60.0,
            seed: 0,
            engine: Engine::Explicit,
        }
    }
}

impl SolverConfig {
    pub fn new(max_worlds: usize, mode: Mode) -> Self {
        SolverConfig {
            max_worlds,
            mode,
            ..Self::default()
        }
    }

    pub fn with_engine(self, engine: Engine) -> Self {
        SolverConfig { engine, ..self }
    }

    pub fn with_budget(self, budget: f64) -> Self {
        SolverConfig { budget, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SolverConfig { seed, ..self }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if self.max_worlds == 0 {
            return Err(SolverError::InvalidConfig("max_worlds must be >= 1".into()));
        }
        if self.budget.is_nan() || self.budget <= 0.0 || !self.budget.is_finite() {
            return Err(SolverError::InvalidConfig("budget must be a positive number of seconds".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "sat")]
    Sat,
    #[serde(rename = "unsat-bounded")]
    UnsatBounded,
    #[serde(rename = "timeout")]
    Timeout,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Sat => "sat",
            Status::UnsatBounded => "unsat-bounded",
            Status::Timeout => "timeout",
        })
    }
}

/// Machine-readable summary of a search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    /// Largest domain size the search reached.
    pub worlds_explored: usize,
    /// Size of the model found.
    pub size: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: Status,
    pub model: Option<KripkeStructure>,
    /// In local and anchored searches the world where the formula (and
    /// anchor) hold; in plain global searches the first world.
    pub witness: Option<String>,
    pub worlds_explored: usize,
    pub size: Option<usize>,
    /// Search nodes (explicit) or conflicts (propositional).
    pub effort: u64,
}

impl SolveOutcome {
    pub fn verdict(&self) -> Verdict {
        Verdict {
            status: self.status,
            worlds_explored: self.worlds_explored,
            size: self.size,
        }
    }

    pub fn is_sat(&self) -> bool {
        self.status == Status::Sat
    }
}

/// Wall-clock limit for a search.
#[derive(Debug, Clone, Copy)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Deadline(None)
    }

    pub fn after(secs: f64) -> Self {
        Deadline(Instant::now().checked_add(Duration::from_secs_f64(secs)))
    }

    pub fn passed(&self) -> bool {
        self.0.is_some_and(|d| Instant::now() >= d)
    }
}

pub(crate) struct Interrupted;

/// A model over worlds `0..n`: proposition indices per world and edges.
pub(crate) struct RawModel {
    labels: Vec<Vec<usize>>,
    edges: Vec<(usize, usize, usize)>,
}

fn world_names(n: usize) -> Vec<String> {
    let width = (n.max(1) - 1).to_string().len();
    (0..n).map(|i| format!("w{i:0width$}")).collect()
}

fn build_structure(raw: &RawModel, props: &[String], relations: usize) -> KripkeStructure {
    let names = world_names(raw.labels.len());
    let mut s = KripkeStructure::new(names.clone(), relations).expect("distinct names");
    for (w, labels) in raw.labels.iter().enumerate() {
        for &p in labels {
            s.label(&names[w], &props[p]).expect("known world");
        }
    }
    for &(rel, u, v) in &raw.edges {
        s.add_edge(rel, &names[u], &names[v]).expect("known worlds");
    }
    s
}

/// Searches for a finite model of `formula` whose frame satisfies `theory`.
pub fn find_model(
    formula: &ModalFormula,
    theory: &FrameTheory,
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolverError> {
    search(formula, None, theory, cfg)
}

/// As [`find_model`], additionally requiring `anchor` at the witness world.
/// With [`Mode::Global`] this asks for a global model with at least one
/// world satisfying `anchor`.
pub fn find_anchored_model(
    formula: &ModalFormula,
    anchor: &ModalFormula,
    theory: &FrameTheory,
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolverError> {
    search(formula, Some(anchor), theory, cfg)
}

fn search(
    formula: &ModalFormula,
    anchor: Option<&ModalFormula>,
    theory: &FrameTheory,
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolverError> {
    cfg.validate()?;
    let deadline = Deadline::after(cfg.budget);
    let mut dag = Dag::new();
    let root = dag.add(formula);
    let anchor_node = anchor.map(|a| dag.add(a));
    let relations = formula
        .max_relation()
        .max(anchor.map_or(0, |a| a.max_relation()))
        .max(theory.relation_count())
        .max(1);

    let mut effort = 0;
    for size in 1..=cfg.max_worlds {
        let mut roots = Vec::new();
        match cfg.mode {
            Mode::Local => roots.push((root, 0)),
            Mode::Global => roots.extend((0..size).map(|w| (root, w))),
        }
        if let Some(a) = anchor_node {
            roots.push((a, 0));
        }
        let pinned = cfg.mode == Mode::Local || anchor_node.is_some();

        let found = match cfg.engine {
            Engine::Explicit => {
                let mut ex = explicit::Explicit::new(&dag, theory, relations, size, pinned);
                let res = if ex.init(&roots) {
                    ex.search(&deadline).map(|ok| ok.then(|| ex.extract()))
                } else {
                    Ok(None)
                };
                effort += ex.nodes;
                res
            }
            Engine::Propositional => {
                let mut g = propositional::Grounding::new(
                    &dag,
                    theory,
                    relations,
                    size,
                    Cdcl::new(cfg.seed),
                );
                for &(node, w) in &roots {
                    g.assert_true(node, w);
                }
                let res = g.solve(&deadline).map(|ok| ok.then(|| g.extract()));
                effort += g.conflicts;
                res
            }
        };
        match found {
            Err(Interrupted) => {
                return Ok(SolveOutcome {
                    status: Status::Timeout,
                    model: None,
                    witness: None,
                    worlds_explored: size,
                    size: None,
                    effort,
                })
            }
            Ok(Some(raw)) => {
                let model = build_structure(&raw, &dag.props, relations);
                let witness = model.world_name(0).to_string();
                return Ok(SolveOutcome {
                    status: Status::Sat,
                    model: Some(model),
                    witness: Some(witness),
                    worlds_explored: size,
                    size: Some(size),
                    effort,
                });
            }
            Ok(None) => {}
        }
    }
    Ok(SolveOutcome {
        status: Status::UnsatBounded,
        model: None,
        witness: None,
        worlds_explored: cfg.max_worlds,
        size: None,
        effort,
    })
}

/// Re-checks a model with the semantics module: the frame satisfies
/// `theory`, and `formula` holds at `witness` (local) or everywhere (global).
pub fn certify(
    model: &KripkeStructure,
    witness: Option<&str>,
    formula: &ModalFormula,
    theory: &FrameTheory,
    mode: Mode,
) -> bool {
    let frame_ok = matches!(check_frame_condition(model, theory), Ok(c) if c.holds());
    let formula_ok = match mode {
        Mode::Local => match witness {
            Some(w) => check_local(model, w, formula).unwrap_or(false),
            None => false,
        },
        Mode::Global => check_global(model, formula).unwrap_or(false),
    };
    frame_ok && formula_ok
}

/// [`certify`] plus `anchor` at the witness world.
pub fn certify_anchored(
    model: &KripkeStructure,
    witness: &str,
    formula: &ModalFormula,
    anchor: &ModalFormula,
    theory: &FrameTheory,
    mode: Mode,
) -> bool {
    certify(model, Some(witness), formula, theory, mode)
        && check_local(model, witness, anchor).unwrap_or(false)
}
