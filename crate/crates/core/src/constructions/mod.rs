//! Generators for the theories Φ and Φ′, the grid-like model family, the
//! domino reduction, and the pruning step used for local instances.

mod domino;
mod figure;
mod grid;
mod phi;
mod prune;

pub use domino::{
    anchor, phi_d, phi_d_prime, reduce, tile_prop, tile_torus, tiling_model, DominoSystem,
    Reduction, Target, TorusTiling,
};
pub use figure::{
    longest_path, two_step_paths, verify_figure, DerivedPair, FigureReport, TheoryReport,
};
pub use grid::{
    grid_model, p_world, parse_grid_world, s_world, t_world, u_world, Decoding, GridModelSpec,
    Topology,
};
pub use phi::{build_phi, build_phi_prime, root_clause, MidConvention};
pub use prune::prune_no_predecessor;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error("signature needs n+m > 1 (got n={n}, m={m})")]
    Signature { n: usize, m: usize },
    #[error("torus needs an even side length (got k={0})")]
    OddTorus(usize),
    #[error("grid needs k >= 1")]
    EmptyGrid,
    #[error("domino system has no tiles")]
    NoTiles,
    #[error("unknown tile `{0}`")]
    UnknownTile(String),
    #[error("unknown option `{0}`")]
    UnknownOption(String),
    #[error("malformed domino file: {0}")]
    Format(String),
}
