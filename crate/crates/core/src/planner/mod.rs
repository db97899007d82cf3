//! Tour planning: the multi-phase bead sweep, its fallbacks and tour
//! validation.

mod alternating;
mod greedy;
mod recursive;
mod tour;

pub use alternating::{alternating_algorithm, euclidean_order, HEADING_CANDIDATES};
pub use greedy::greedy_fallback;
pub use recursive::{
    default_phases, recursive_bead_tiling, recursive_bead_tiling_with, Fallback, PhaseRecord,
    PhaseStats, PlannerConfig,
};
pub use tour::{
    distance_to_path, validate_tour, TargetSet, Tour, TourBuilder, ValidationReport, Visit,
    VisitPhase, CONTINUITY_TOL, EPS_VISIT,
};
