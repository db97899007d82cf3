//! Tour planning for a bounded-curvature vehicle over uniformly scattered
//! targets, using a recursive bead tiling of the environment.
//!
//! The crate is organized bottom-up:
//!
//! - [`dubins`]: shortest bounded-curvature paths between poses.
//! - [`bead`]: the bead region and paths through it.
//! - [`tiling`]: the bead lattice over a rectangle and its meta-beads.
//! - [`planner`]: the multi-phase sweep, fallbacks and validation.
//! - [`bounds`]: closed-form length and occupancy bounds.
//! - [`experiments`]: seeded instances, trials, sweeps and fits.

pub mod bead;
pub mod bounds;
pub mod dubins;
pub mod error;
pub mod experiments;
pub mod geom;
pub mod planner;
pub mod tiling;

pub use bead::{bead_area, bead_width, solve_bead_half_length, traversal_path, Bead, Traversal};
pub use dubins::{
    path_length, sample_path, shortest_path, word_length, DubinsPath, Pose, Rho, Steer, Word,
};
pub use error::{Error, Result};
pub use geom::Point;
pub use planner::{
    alternating_algorithm, greedy_fallback, recursive_bead_tiling, recursive_bead_tiling_with,
    validate_tour, Fallback, PhaseStats, PlannerConfig, TargetSet, Tour,
};
pub use tiling::{build_tiling, BeadGrid, BeadId, Environment, MetaBeadId};
