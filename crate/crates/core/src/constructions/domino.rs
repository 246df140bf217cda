use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::grid::{grid_model, p_world, s_world, t_world, u_world, GridModelSpec};
use super::phi::{build_phi, build_phi_prime, MidConvention};
use super::ConstructionError;
use crate::semantics::KripkeStructure;
use crate::syntax::{FrameTheory, ModalFormula as F, RelIndex};

/// Tiles with horizontal and vertical compatibility: `(t, r) ∈ H` allows `r`
/// right of `t`, `(t, u) ∈ V` allows `u` above `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominoSystem {
    pub tiles: Vec<String>,
    #[serde(rename = "H")]
    pub horizontal: Vec<(String, String)>,
    #[serde(rename = "V")]
    pub vertical: Vec<(String, String)>,
}

impl DominoSystem {
    pub fn new(
        tiles: &[&str],
        horizontal: &[(&str, &str)],
        vertical: &[(&str, &str)],
    ) -> Result<Self, ConstructionError> {
        let own = |v: &[(&str, &str)]| v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        let d = DominoSystem {
            tiles: tiles.iter().map(|t| t.to_string()).collect(),
            horizontal: own(horizontal),
            vertical: own(vertical),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn from_json(text: &str) -> Result<Self, ConstructionError> {
        let d: DominoSystem =
            serde_json::from_str(text).map_err(|e| ConstructionError::Format(e.to_string()))?;
        d.validate()?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("domino systems serialize")
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        if self.tiles.is_empty() {
            return Err(ConstructionError::NoTiles);
        }
        let set: BTreeSet<&String> = self.tiles.iter().collect();
        if set.len() != self.tiles.len() {
            return Err(ConstructionError::Format("duplicate tile".into()));
        }
        for (a, b) in self.horizontal.iter().chain(&self.vertical) {
            for t in [a, b] {
                if !set.contains(t) {
                    return Err(ConstructionError::UnknownTile(t.clone()));
                }
            }
        }
        Ok(())
    }

    fn index(&self, name: &str) -> usize {
        self.tiles.iter().position(|t| t == name).expect("validated tile")
    }

    /// Compatibility matrices `h[t][r]`, `v[t][u]` over tile indices.
    pub(crate) fn matrices(&self) -> (Vec<Vec<bool>>, Vec<Vec<bool>>) {
        let n = self.tiles.len();
        let mut h = vec![vec![false; n]; n];
        let mut v = vec![vec![false; n]; n];
        for (a, b) in &self.horizontal {
            h[self.index(a)][self.index(b)] = true;
        }
        for (a, b) in &self.vertical {
            v[self.index(a)][self.index(b)] = true;
        }
        (h, v)
    }
}

/// A tiling of the `size × size` torus; `cells[y * size + x]` is a tile index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusTiling {
    pub size: usize,
    pub cells: Vec<usize>,
}

impl TorusTiling {
    pub fn tile(&self, x: usize, y: usize) -> usize {
        self.cells[y * self.size + x]
    }

    /// Rows from top (`y = size-1`) to bottom, tile names separated by spaces.
    pub fn render(&self, d: &DominoSystem) -> String {
        let mut out = String::new();
        for y in (0..self.size).rev() {
            let row: Vec<&str> = (0..self.size)
                .map(|x| d.tiles[self.tile(x, y)].as_str())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// First tiling of the `e × e` torus in row-major order (tiles tried in
/// declaration order), by backtracking.
pub fn tile_torus(d: &DominoSystem, e: usize) -> Option<TorusTiling> {
    if e == 0 {
        return None;
    }
    let (h, v) = d.matrices();
    let mut cells = vec![usize::MAX; e * e];
    fn fits(cells: &[usize], e: usize, i: usize, t: usize, h: &[Vec<bool>], v: &[Vec<bool>]) -> bool {
        let (x, y) = (i % e, i / e);
        let at = |x: usize, y: usize| cells[y * e + x];
        let left = at((x + e - 1) % e, y);
        let right = at((x + 1) % e, y);
        let below = at(x, (y + e - 1) % e);
        let above = at(x, (y + 1) % e);
        (left == usize::MAX || h[left][t])
            && (right == usize::MAX || h[t][right])
            && (below == usize::MAX || v[below][t])
            && (above == usize::MAX || v[t][above])
    }
    fn go(cells: &mut Vec<usize>, e: usize, i: usize, h: &[Vec<bool>], v: &[Vec<bool>]) -> bool {
        if i == cells.len() {
            return true;
        }
        for t in 0..h.len() {
            // the cell itself is still unset, so self-adjacency (e = 1) is checked explicitly
            if e == 1 && !(h[t][t] && v[t][t]) {
                continue;
            }
            if fits(cells, e, i, t, h, v) {
                cells[i] = t;
                if go(cells, e, i + 1, h, v) {
                    return true;
                }
                cells[i] = usize::MAX;
            }
        }
        false
    }
    if go(&mut cells, e, 0, &h, &v) {
        Some(TorusTiling { size: e, cells })
    } else {
        None
    }
}

const IS_P: &str = "is_p";
const IS_U: &str = "is_u";
const IS_S: &str = "is_s";
const IS_T: &str = "is_t";
const PAR_A: &str = "a";
const PAR_B: &str = "b";

pub fn tile_prop(tile: &str) -> String {
    format!("tile_{tile}")
}

fn lit(name: &str, positive: bool) -> F {
    if positive {
        F::var(name)
    } else {
        F::not(F::var(name))
    }
}

fn parity(a: bool, b: bool) -> F {
    F::and(lit(PAR_A, a), lit(PAR_B, b))
}

fn sort_at(sort: &str, a: bool, b: bool) -> F {
    F::and(F::var(sort), parity(a, b))
}

fn exactly_one(props: &[String]) -> F {
    let at_least = F::disj(props.iter().map(F::var));
    let mut at_most = Vec::new();
    for i in 0..props.len() {
        for j in i + 1..props.len() {
            at_most.push(F::not(F::and(F::var(&props[i]), F::var(&props[j]))));
        }
    }
    F::conj(std::iter::once(at_least).chain(at_most))
}

/// `r(c)`: the relation of the outgoing P edges of a cell with colour `c`.
fn cell_relation(colour: bool) -> RelIndex {
    if colour {
        2
    } else {
        1
    }
}

/// The tiling formula φ_D, to be satisfied globally.
///
/// P worlds carry the tiles and point (in the relation of their cell colour
/// `a ⊕ b`) to their right and upper neighbours and to the U world of their
/// cell; U worlds point (in the other relation) to the S/T gadget and to the
/// diagonal P world. Compatibility is enforced on right, upper and diagonal
/// successors.
pub fn phi_d(d: &DominoSystem) -> F {
    let (h, v) = d.matrices();
    let n = d.tiles.len();
    let tiles: Vec<String> = d.tiles.iter().map(|t| tile_prop(t)).collect();
    let sorts: Vec<String> = [IS_P, IS_U, IS_S, IS_T].iter().map(|s| s.to_string()).collect();

    let mut conj = vec![
        exactly_one(&sorts),
        F::implies(F::var(IS_P), exactly_one(&tiles)),
        F::implies(
            F::not(F::var(IS_P)),
            F::conj(tiles.iter().map(|t| F::not(F::var(t)))),
        ),
        F::implies(F::var(IS_T), F::and(F::boxed(1, F::Bottom), F::boxed(2, F::Bottom))),
    ];

    let allowed = |set: Vec<usize>| F::disj(set.into_iter().map(|t| F::var(&tiles[t])));
    for a in [false, true] {
        for b in [false, true] {
            let colour = a ^ b;
            let r = cell_relation(colour);
            let q = cell_relation(!colour);
            let right = sort_at(IS_P, !a, b);
            let up = sort_at(IS_P, a, !b);
            let diag = sort_at(IS_P, !a, !b);

            let mut p = vec![
                F::diamond(r, right.clone()),
                F::diamond(r, up.clone()),
                F::diamond(r, sort_at(IS_U, a, b)),
                F::boxed(q, F::Bottom),
            ];
            for t in 0..n {
                let hs: Vec<usize> = (0..n).filter(|&x| h[t][x]).collect();
                let vs: Vec<usize> = (0..n).filter(|&x| v[t][x]).collect();
                let ds: Vec<usize> = (0..n)
                    .filter(|&x| {
                        (0..n).any(|m| h[t][m] && v[m][x]) && (0..n).any(|m| v[t][m] && h[m][x])
                    })
                    .collect();
                p.push(F::implies(
                    F::var(&tiles[t]),
                    F::conj([
                        F::boxed(r, F::implies(right.clone(), allowed(hs))),
                        F::boxed(r, F::implies(up.clone(), allowed(vs))),
                        F::boxed(
                            r,
                            F::implies(
                                F::var(IS_U),
                                F::boxed(q, F::implies(diag.clone(), allowed(ds))),
                            ),
                        ),
                    ]),
                ));
            }
            conj.push(F::implies(sort_at(IS_P, a, b), F::conj(p)));

            conj.push(F::implies(
                sort_at(IS_U, a, b),
                F::conj([
                    F::diamond(q, sort_at(IS_S, a, b)),
                    F::diamond(q, sort_at(IS_T, a, b)),
                    F::diamond(q, diag),
                    F::boxed(r, F::Bottom),
                ]),
            ));
            conj.push(F::implies(
                sort_at(IS_S, a, b),
                F::and(F::diamond(q, sort_at(IS_T, a, b)), F::boxed(r, F::Bottom)),
            ));
        }
    }
    F::conj(conj)
}

/// Proposition that must hold at the witness world of a global instance.
pub fn anchor() -> F {
    F::var(IS_P)
}

/// `◇_1 ⊤ ∧ ◇_2 ⊤ ∧ □_1 φ_D`.
pub fn phi_d_prime(d: &DominoSystem) -> F {
    F::conj([
        F::diamond(1, F::Top),
        F::diamond(2, F::Top),
        F::boxed(1, phi_d(d)),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Global,
    Local,
}

impl std::str::FromStr for Target {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "global" => Ok(Target::Global),
            "local" => Ok(Target::Local),
            other => Err(ConstructionError::UnknownOption(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub theory: FrameTheory,
    pub formula: F,
    /// For global instances: a world satisfying this must exist. Global
    /// satisfiability alone is trivial (a single dead-end T world is a model).
    pub anchor: Option<F>,
}

/// Domino reduction over two free relations.
pub fn reduce(d: &DominoSystem, target: Target, c: MidConvention) -> Result<Reduction, ConstructionError> {
    d.validate()?;
    Ok(match target {
        Target::Global => Reduction {
            theory: build_phi(2, 0, c)?,
            formula: phi_d(d),
            anchor: Some(anchor()),
        },
        Target::Local => Reduction {
            theory: build_phi_prime(2, 0, c)?,
            formula: phi_d_prime(d),
            anchor: None,
        },
    })
}

/// The torus grid model labelled by a tiling: sorts, cell parities and tiles.
pub fn tiling_model(d: &DominoSystem, tiling: &TorusTiling) -> Result<KripkeStructure, ConstructionError> {
    let e = tiling.size;
    let mut s = grid_model(&GridModelSpec::torus(e))?;
    for x in 0..e {
        for y in 0..e {
            let worlds = [
                (p_world(x, y), IS_P),
                (u_world(x, y), IS_U),
                (s_world(x, y), IS_S),
                (t_world(x, y), IS_T),
            ];
            for (w, sort) in worlds {
                s.label(&w, sort).expect("grid world");
                if x % 2 == 1 {
                    s.label(&w, PAR_A).expect("grid world");
                }
                if y % 2 == 1 {
                    s.label(&w, PAR_B).expect("grid world");
                }
            }
            s.label(&p_world(x, y), &tile_prop(&d.tiles[tiling.tile(x, y)]))
                .expect("grid world");
        }
    }
    Ok(s)
}
