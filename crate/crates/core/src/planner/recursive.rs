//! Multi-phase bead sweep.
//!
//! Phase `i` sweeps the phase-`i` meta-beads row by row in boustrophedon
//! order and services one unvisited target (the one with the smallest
//! index) in every non-empty meta-bead. Targets that share a meta-bead wait
//! for a later, coarser phase. After the last phase the remaining targets
//! are handed to a fallback and the tour is closed at its start pose.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use super::alternating::{alternating_open, alternating_path, uniform_headings};
use super::greedy::greedy_path;
use super::tour::{TargetSet, Tour, TourBuilder, VisitPhase};
use crate::bead::Traversal;
use crate::dubins::{heading_for, shortest_path, DubinsPath, Pose, Rho};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::tiling::{build_tiling, BeadGrid, BeadId, Environment, MetaBeadId};

/// Strategy for targets left over after the last phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Fallback {
    #[default]
    Alternating,
    Greedy,
}

impl fmt::Display for Fallback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fallback::Alternating => "alternating",
            Fallback::Greedy => "greedy",
        })
    }
}

impl FromStr for Fallback {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "alternating" => Ok(Fallback::Alternating),
            "greedy" => Ok(Fallback::Greedy),
            other => Err(format!("unknown fallback `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PlannerConfig {
    pub fallback: Fallback,
    /// Overrides the default phase count `⌊log₂ n⌋ + 1`.
    pub phases: Option<u32>,
}

/// Measurements of one sweep phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseRecord {
    pub phase: u32,
    /// Beads holding unvisited targets when the phase starts.
    pub nonempty_beads: usize,
    /// Meta-beads of this phase.
    pub meta_beads: usize,
    /// Flown length, including the move to the next phase's start.
    pub length: f64,
    pub served: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhaseStats {
    pub phases: Vec<PhaseRecord>,
    /// Targets left for the fallback.
    pub leftover: usize,
    pub fallback_length: f64,
    pub closure_length: f64,
    /// Bead half-length, absent when the instance was too small to tile.
    pub half_length: Option<f64>,
}

impl PhaseStats {
    pub fn served(&self) -> usize {
        self.phases.iter().map(|p| p.served).sum()
    }

    pub fn phase_length(&self, phase: u32) -> Option<f64> {
        self.phases
            .iter()
            .find(|p| p.phase == phase)
            .map(|p| p.length)
    }

    pub fn total_length(&self) -> f64 {
        self.phases.iter().map(|p| p.length).sum::<f64>()
            + self.fallback_length
            + self.closure_length
    }
}

/// Default phase count `⌊log₂ n⌋ + 1`.
pub fn default_phases(n: usize) -> u32 {
    n.max(1).ilog2() + 1
}

/// Plans with the default configuration.
pub fn recursive_bead_tiling(
    targets: &TargetSet,
    env: Environment,
    rho: Rho,
) -> Result<(Tour, PhaseStats)> {
    recursive_bead_tiling_with(targets, env, rho, &PlannerConfig::default())
}

pub fn recursive_bead_tiling_with(
    targets: &TargetSet,
    env: Environment,
    rho: Rho,
    config: &PlannerConfig,
) -> Result<(Tour, PhaseStats)> {
    let n = targets.len();
    if n == 0 {
        return Err(Error::EmptyTargets);
    }
    if let Some(p) = targets.points().iter().find(|p| !env.contains(**p)) {
        return Err(Error::PointOutsideEnvironment { x: p.x, y: p.y });
    }
    let grid = match build_tiling(env, n, rho) {
        Ok(g) => g,
        Err(Error::NTooSmall { .. }) => return Ok(untiled(targets, rho)),
        Err(e) => return Err(e),
    };
    Sweep::new(&grid, targets, config).run()
}

/// Plan for instances too small to tile: the alternating algorithm over all
/// targets.
fn untiled(targets: &TargetSet, rho: Rho) -> (Tour, PhaseStats) {
    let open = alternating_open(targets, rho, None);
    let fallback_length = open.length();
    let tour = open.finish(true);
    let stats = PhaseStats {
        phases: Vec::new(),
        leftover: targets.len(),
        fallback_length,
        closure_length: tour.length() - fallback_length,
        half_length: None,
    };
    (tour, stats)
}

struct Sweep<'a> {
    grid: &'a BeadGrid,
    targets: &'a TargetSet,
    config: &'a PlannerConfig,
    bead_of: Vec<BeadId>,
    served: Vec<bool>,
    builder: TourBuilder,
}

/// Start pose of a phase: left end of its top lane, heading right.
fn phase_start(grid: &BeadGrid, phase: u32) -> Pose {
    Pose::new(0.0, grid.lane_y(phase, 0), 0.0)
}

impl<'a> Sweep<'a> {
    fn new(grid: &'a BeadGrid, targets: &'a TargetSet, config: &'a PlannerConfig) -> Self {
        let bead_of = targets
            .points()
            .iter()
            .map(|&p| {
                grid.locate(p)
                    .expect("targets checked against the environment")
            })
            .collect();
        Self {
            grid,
            targets,
            config,
            bead_of,
            served: vec![false; targets.len()],
            builder: TourBuilder::new(phase_start(grid, 1), grid.rho),
        }
    }

    fn run(mut self) -> Result<(Tour, PhaseStats)> {
        let n = self.targets.len();
        let phases = self.config.phases.unwrap_or_else(|| default_phases(n));
        let mut records = Vec::new();
        for phase in 1..=phases {
            if self.served.iter().all(|&s| s) {
                break;
            }
            let before = self.builder.length();
            let nonempty_beads = self.unvisited_beads();
            let served = self.sweep_phase(phase);
            let more = phase < phases && self.served.iter().any(|&s| !s);
            if more {
                self.builder.goto(phase_start(self.grid, phase + 1));
            }
            records.push(PhaseRecord {
                phase,
                nonempty_beads,
                meta_beads: self.grid.meta_bead_count(phase),
                length: self.builder.length() - before,
                served,
            });
        }

        let left: Vec<(usize, Point)> = (0..n)
            .filter(|&t| !self.served[t])
            .map(|t| (t, self.targets.get(t)))
            .collect();
        let before = self.builder.length();
        let origin = phase_start(self.grid, 1);
        if !left.is_empty() {
            match self.config.fallback {
                Fallback::Alternating => {
                    alternating_path(&mut self.builder, &left, origin, VisitPhase::Fallback)
                }
                Fallback::Greedy => greedy_path(&mut self.builder, &left, VisitPhase::Fallback),
            }
        }
        let fallback_length = self.builder.length() - before;
        let open_length = self.builder.length();
        let tour = self.builder.finish(true);
        let stats = PhaseStats {
            phases: records,
            leftover: left.len(),
            fallback_length,
            closure_length: tour.length() - open_length,
            half_length: Some(self.grid.l),
        };
        Ok((tour, stats))
    }

    fn unvisited_beads(&self) -> usize {
        (0..self.targets.len())
            .filter(|&t| !self.served[t])
            .map(|t| self.bead_of[t])
            .collect::<BTreeSet<_>>()
            .len()
    }

    fn sweep_phase(&mut self, phase: u32) -> usize {
        let mut pick: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for t in 0..self.targets.len() {
            if !self.served[t] {
                let m = self.grid.meta_bead_of(self.bead_of[t], phase);
                pick.entry((m.row, m.col)).or_insert(t);
            }
        }
        let mut count = 0;
        for id in self.grid.row_sweep_order(phase) {
            let dir = BeadGrid::row_direction(id.row);
            let (entry, exit) = self.grid.meta_bead_entry_exit(id, dir);
            self.builder.goto(entry);
            match pick.get(&(id.row, id.col)) {
                Some(&t) => {
                    self.service(id, t, dir, entry, exit);
                    self.served[t] = true;
                    count += 1;
                }
                None => self.run_lane(exit, dir),
            }
        }
        count
    }

    /// Straight run along the lane up to `exit`.
    fn run_lane(&mut self, exit: Pose, dir: i32) {
        let pose = self.builder.pose();
        let ahead = (exit.x - pose.x) * f64::from(dir);
        if ahead > 0.0 && (exit.y - pose.y).abs() <= 1e-12 {
            let start = Pose::new(pose.x, pose.y, heading_for(dir == 1));
            self.builder
                .push(DubinsPath::straight(start, ahead, self.grid.rho));
        } else {
            self.builder.goto(exit);
        }
    }

    fn traversal(&self, t: usize, dir: i32) -> Traversal {
        self.grid
            .bead(self.bead_of[t])
            .traversal(self.targets.get(t), dir)
            .expect("located targets lie in their bead")
    }

    fn service(&mut self, id: MetaBeadId, t: usize, dir: i32, entry: Pose, exit: Pose) {
        let rho = self.grid.rho;
        let p = self.targets.get(t);
        let phase = VisitPhase::Phase(id.phase);
        let base = self.builder.length();
        let from = self.builder.pose();

        if id.phase == 1 {
            let trav = self.traversal(t, dir);
            self.builder.visit(t, phase, base + trav.target_offset);
            self.builder.extend(trav.pieces);
            return;
        }

        // through the target's own bead
        let trav = self.traversal(t, dir);
        let lead_in = shortest_path(from, trav.start(), rho);
        let lead_out = shortest_path(trav.end(), exit, rho);
        let via_bead = lead_in.length() + trav.length() + lead_out.length();

        // straight at the target with a free heading
        let mut best: Option<(f64, DubinsPath, DubinsPath)> = None;
        let sweep = std::iter::once(heading_for(dir == 1)).chain(uniform_headings());
        for theta in sweep {
            let at = Pose::at(p, theta);
            let a = shortest_path(from, at, rho);
            let b = shortest_path(at, exit, rho);
            let len = a.length() + b.length();
            if best.as_ref().is_none_or(|x| len < x.0) {
                best = Some((len, a, b));
            }
        }
        let (direct, a, b) = best.expect("at least one heading");
        debug_assert!(entry.mismatch(&from) <= 1e-9);

        if via_bead <= direct {
            let offset = lead_in.length() + trav.target_offset;
            self.builder.visit(t, phase, base + offset);
            self.builder.push(lead_in);
            self.builder.extend(trav.pieces);
            self.builder.push(lead_out);
        } else {
            self.builder.visit(t, phase, base + a.length());
            self.builder.push(a);
            self.builder.push(b);
        }
    }
}
