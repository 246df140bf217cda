use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::semantics::KripkeStructure;
use crate::syntax::RelIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    /// `k × k` cells with a border row and column of P worlds.
    #[default]
    Patch,
    /// `k × k` cells with wraparound; `k` must be even.
    Torus,
}

/// Which relation the thick edges of the drawing stand for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Decoding {
    #[default]
    #[serde(rename = "thick=R1")]
    ThickR1,
    #[serde(rename = "thick=R2")]
    ThickR2,
}

impl Decoding {
    pub fn thick(self) -> RelIndex {
        match self {
            Decoding::ThickR1 => 1,
            Decoding::ThickR2 => 2,
        }
    }

    pub fn dashed(self) -> RelIndex {
        3 - self.thick()
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::Patch => "patch",
            Topology::Torus => "torus",
        })
    }
}

impl FromStr for Topology {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "patch" => Ok(Topology::Patch),
            "torus" => Ok(Topology::Torus),
            other => Err(ConstructionError::UnknownOption(other.to_string())),
        }
    }
}

impl fmt::Display for Decoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "thick=R{}", self.thick())
    }
}

impl FromStr for Decoding {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "thick=R1" | "R1" => Ok(Decoding::ThickR1),
            "thick=R2" | "R2" => Ok(Decoding::ThickR2),
            other => Err(ConstructionError::UnknownOption(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridModelSpec {
    pub k: usize,
    pub topology: Topology,
    pub decoding: Decoding,
}

impl GridModelSpec {
    pub fn patch(k: usize) -> Self {
        GridModelSpec {
            k,
            topology: Topology::Patch,
            decoding: Decoding::ThickR1,
        }
    }

    pub fn torus(k: usize) -> Self {
        GridModelSpec {
            k,
            topology: Topology::Torus,
            decoding: Decoding::ThickR1,
        }
    }

    pub fn with_decoding(self, decoding: Decoding) -> Self {
        GridModelSpec { decoding, ..self }
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        if self.k == 0 {
            return Err(ConstructionError::EmptyGrid);
        }
        if self.topology == Topology::Torus && self.k % 2 == 1 {
            return Err(ConstructionError::OddTorus(self.k));
        }
        Ok(())
    }
}

pub fn p_world(x: usize, y: usize) -> String {
    format!("P_{x}_{y}")
}

pub fn u_world(x: usize, y: usize) -> String {
    format!("U_{x}_{y}")
}

pub fn s_world(x: usize, y: usize) -> String {
    format!("S_{x}_{y}")
}

pub fn t_world(x: usize, y: usize) -> String {
    format!("T_{x}_{y}")
}

/// Splits a grid world name into its sort letter and coordinates.
pub fn parse_grid_world(name: &str) -> Option<(char, usize, usize)> {
    let mut parts = name.split('_');
    let sort = parts.next()?;
    let x = parts.next()?.parse().ok()?;
    let y = parts.next()?.parse().ok()?;
    if parts.next().is_some() {
        return None;
    }
    match sort {
        "P" | "U" | "S" | "T" => Some((sort.chars().next().unwrap(), x, y)),
        _ => None,
    }
}

/// The drawn edges of cell `(x, y)` as `(thick?, from, to)`, before decoding.
pub(crate) fn cell_edges(spec: &GridModelSpec, x: usize, y: usize) -> Vec<(bool, String, String)> {
    let k = spec.k;
    let wrap = |i: usize| match spec.topology {
        Topology::Patch => i,
        Topology::Torus => i % k,
    };
    let (x1, y1) = (wrap(x + 1), wrap(y + 1));
    let even = (x + y).is_multiple_of(2);
    let p = p_world(x, y);
    let u = u_world(x, y);
    let s = s_world(x, y);
    let t = t_world(x, y);
    let first = [
        (p.clone(), p_world(x1, y)),
        (p.clone(), p_world(x, y1)),
        (p, u.clone()),
    ];
    let rest = [
        (u.clone(), p_world(x1, y1)),
        (u.clone(), s.clone()),
        (s, t.clone()),
        (u, t),
        (p_world(x1, y), p_world(x1, y1)),
        (p_world(x, y1), p_world(x1, y1)),
    ];
    first
        .into_iter()
        .map(|(a, b)| (even, a, b))
        .chain(rest.into_iter().map(|(a, b)| (!even, a, b)))
        .collect()
}

/// The grid-like model family of the figure, with empty valuation.
pub fn grid_model(spec: &GridModelSpec) -> Result<KripkeStructure, ConstructionError> {
    spec.validate()?;
    let k = spec.k;
    let border = match spec.topology {
        Topology::Patch => k + 1,
        Topology::Torus => k,
    };
    let mut worlds = Vec::new();
    for x in 0..border {
        for y in 0..border {
            worlds.push(p_world(x, y));
        }
    }
    for x in 0..k {
        for y in 0..k {
            worlds.extend([u_world(x, y), s_world(x, y), t_world(x, y)]);
        }
    }
    let mut s = KripkeStructure::new(worlds, 2).expect("grid world names are distinct");
    for x in 0..k {
        for y in 0..k {
            for (thick, a, b) in cell_edges(spec, x, y) {
                let rel = if thick {
                    spec.decoding.thick()
                } else {
                    spec.decoding.dashed()
                };
                s.add_edge(rel, &a, &b).expect("edge endpoints are grid worlds");
            }
        }
    }
    Ok(s)
}
