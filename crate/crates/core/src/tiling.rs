//! Periodic bead tiling of a rectangular environment and the meta-bead
//! hierarchy used by successive sweep phases.
//!
//! Rows are numbered from the top edge down. Row `r` has its axis at
//! `y = H − r·w/2`; even rows have bead centres at `x = l + 2lc`, odd rows at
//! `x = 2lc`. Adjacent beads in a row share endpoints, and the boundary
//! curves of neighbouring rows coincide, so every point belongs to one bead
//! except on shared boundaries. Those are resolved in favour of the lower
//! bead on the page (larger row index), then the smaller column.
//!
//! A phase-`i` meta-bead groups `2^⌈(i−1)/2⌉` consecutive columns by
//! `2^⌊(i−1)/2⌋` consecutive rows.

use std::collections::BTreeMap;

use crate::bead::{bead_area, solve_bead_half_length, Bead};
use crate::dubins::{heading_for, Pose, Rho};
use crate::error::{Error, Result};
use crate::geom::Point;

/// Margins closer than this are treated as ties in point location.
const TIE_TOL: f64 = 1e-12;

/// Axis-aligned rectangle `[0, W] × [0, H]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Environment {
    pub width: f64,
    pub height: f64,
}

impl Environment {
    pub fn new(width: f64, height: f64) -> Result<Self> {
        if width.is_finite() && height.is_finite() && width > 0.0 && height > 0.0 {
            Ok(Self { width, height })
        } else {
            Err(Error::InvalidEnvironment { width, height })
        }
    }

    pub fn unit() -> Self {
        Self {
            width: 1.0,
            height: 1.0,
        }
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn contains(&self, p: Point) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BeadId {
    pub row: usize,
    pub col: usize,
}

impl BeadId {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MetaBeadId {
    pub phase: u32,
    pub row: usize,
    pub col: usize,
}

/// Column and row doubling exponents of a phase.
pub fn phase_exponents(phase: u32) -> (u32, u32) {
    assert!(phase >= 1, "phase index starts at 1");
    (phase / 2, (phase - 1) / 2)
}

/// The bead lattice covering an environment.
#[derive(Debug, Clone, PartialEq)]
pub struct BeadGrid {
    pub env: Environment,
    pub rho: Rho,
    /// Bead half-length.
    pub l: f64,
    /// Bead width.
    pub w: f64,
    /// Probability that a uniform point falls in a given bead.
    pub mu: f64,
    pub row_count: usize,
    even_cols: usize,
    odd_cols: usize,
}

/// Tiling sized so that each bead has area `W·H / 2n`.
pub fn build_tiling(env: Environment, n: usize, rho: Rho) -> Result<BeadGrid> {
    let n = n.max(1);
    let area = env.area() / (2.0 * n as f64);
    let r = rho.get();
    if area >= 8.0 * r * r {
        return Err(Error::NTooSmall { n, area, rho: r });
    }
    let l = solve_bead_half_length(area, rho)?;
    BeadGrid::with_half_length(env, l, rho)
}

impl BeadGrid {
    /// Tiling with an explicit bead half-length.
    pub fn with_half_length(env: Environment, l: f64, rho: Rho) -> Result<Self> {
        let area = bead_area(l, rho)?;
        let w = area / l;
        let row_count = (2.0 * env.height / w + 1.0).ceil() as usize;
        let even_cols = (env.width / (2.0 * l)).ceil().max(1.0) as usize;
        let odd_cols = (env.width / (2.0 * l) + 0.5).ceil() as usize;
        Ok(Self {
            env,
            rho,
            l,
            w,
            mu: area / env.area(),
            row_count,
            even_cols,
            odd_cols,
        })
    }

    /// Number of beads in row `r`.
    pub fn cols(&self, row: usize) -> usize {
        if row.is_multiple_of(2) {
            self.even_cols
        } else {
            self.odd_cols
        }
    }

    pub fn col_count(&self) -> usize {
        self.even_cols.max(self.odd_cols)
    }

    pub fn bead_count(&self) -> usize {
        (0..self.row_count).map(|r| self.cols(r)).sum()
    }

    pub fn is_valid(&self, id: BeadId) -> bool {
        id.row < self.row_count && id.col < self.cols(id.row)
    }

    pub fn row_y(&self, row: usize) -> f64 {
        self.env.height - row as f64 * 0.5 * self.w
    }

    pub fn center(&self, id: BeadId) -> Point {
        let offset = if id.row.is_multiple_of(2) {
            self.l
        } else {
            0.0
        };
        Point::new(offset + 2.0 * self.l * id.col as f64, self.row_y(id.row))
    }

    pub fn bead(&self, id: BeadId) -> Bead {
        Bead::horizontal(self.center(id), self.l, self.rho).expect("grid half-length is valid")
    }

    pub fn ids(&self) -> impl Iterator<Item = BeadId> + '_ {
        (0..self.row_count).flat_map(move |r| (0..self.cols(r)).map(move |c| BeadId::new(r, c)))
    }

    /// True when the bead's bounding box lies inside the environment.
    pub fn fully_inside(&self, id: BeadId) -> bool {
        let c = self.center(id);
        let h = 0.5 * self.w;
        c.x - self.l >= 0.0
            && c.x + self.l <= self.env.width
            && c.y - h >= 0.0
            && c.y + h <= self.env.height
    }

    /// Prefers larger margin; near-ties go to the larger row, then the
    /// smaller column.
    fn better(&self, cand: (f64, BeadId), best: (f64, BeadId)) -> bool {
        let (cm, ci) = cand;
        let (bm, bi) = best;
        if (cm - bm).abs() > TIE_TOL {
            return cm > bm;
        }
        (ci.row, std::cmp::Reverse(ci.col)) > (bi.row, std::cmp::Reverse(bi.col))
    }

    /// The bead containing `p`.
    pub fn locate(&self, p: Point) -> Result<BeadId> {
        if !(p.is_finite() && self.env.contains(p)) {
            return Err(Error::PointOutsideEnvironment { x: p.x, y: p.y });
        }
        let (l, hw) = (self.l, 0.5 * self.w);
        let a = (p.x - l) / l + (p.y - self.env.height) / hw;
        let b = (p.x - l) / l - (p.y - self.env.height) / hw;
        let ia = ((a + 1.0) / 2.0).floor() as i64;
        let ib = ((b + 1.0) / 2.0).floor() as i64;
        let row = ib - ia;

        let mut best: Option<(f64, BeadId)> = None;
        // four beads meet at each apex, spanning three rows
        for r in row - 2..=row + 2 {
            if r < 0 || r as usize >= self.row_count {
                continue;
            }
            let r = r as usize;
            let offset = if r.is_multiple_of(2) { l } else { 0.0 };
            let guess = ((p.x - offset) / (2.0 * l)).round() as i64;
            for c in guess - 1..=guess + 1 {
                if c < 0 || c as usize >= self.cols(r) {
                    continue;
                }
                let id = BeadId::new(r, c as usize);
                let cand = (self.bead(id).margin(p), id);
                if best.is_none_or(|b| self.better(cand, b)) {
                    best = Some(cand);
                }
            }
        }
        Ok(best
            .expect("every point of the environment has a candidate bead")
            .1)
    }

    pub fn meta_bead_of(&self, id: BeadId, phase: u32) -> MetaBeadId {
        let (ce, re) = phase_exponents(phase);
        MetaBeadId {
            phase,
            row: id.row >> re,
            col: id.col >> ce,
        }
    }

    pub fn meta_row_count(&self, phase: u32) -> usize {
        let (_, re) = phase_exponents(phase);
        self.row_count.div_ceil(1 << re)
    }

    pub fn meta_cols(&self, phase: u32, meta_row: usize) -> usize {
        let (ce, re) = phase_exponents(phase);
        let first = meta_row << re;
        let last = ((meta_row + 1) << re).min(self.row_count);
        (first..last)
            .map(|r| self.cols(r).div_ceil(1 << ce))
            .max()
            .unwrap_or(0)
    }

    /// Number of phase-`i` meta-beads.
    pub fn meta_bead_count(&self, phase: u32) -> usize {
        (0..self.meta_row_count(phase))
            .map(|mr| self.meta_cols(phase, mr))
            .sum()
    }

    /// Boustrophedon order of meta-beads: top meta-row left to right, next
    /// right to left, and so on.
    pub fn row_sweep_order(&self, phase: u32) -> Vec<MetaBeadId> {
        let mut out = Vec::with_capacity(self.meta_bead_count(phase));
        for mr in 0..self.meta_row_count(phase) {
            let cols = self.meta_cols(phase, mr);
            let ids = (0..cols).map(|col| MetaBeadId {
                phase,
                row: mr,
                col,
            });
            if mr % 2 == 0 {
                out.extend(ids);
            } else {
                out.extend(ids.rev());
            }
        }
        out
    }

    /// Sweep direction of a meta-row: `+1` left to right, `−1` right to left.
    pub fn row_direction(meta_row: usize) -> i32 {
        if meta_row.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Height of the sweep lane through a meta-row.
    pub fn lane_y(&self, phase: u32, meta_row: usize) -> f64 {
        let (_, re) = phase_exponents(phase);
        let r0 = meta_row << re;
        let span = ((1usize << re) - 1) as f64;
        self.env.height - (r0 as f64 + 0.5 * span) * 0.5 * self.w
    }

    /// Left and right ends of the meta-bead's lane segment, taken from the
    /// top bead row of the meta-row.
    pub fn meta_extent(&self, id: MetaBeadId) -> (f64, f64) {
        let (ce, re) = phase_exponents(id.phase);
        let r0 = id.row << re;
        let c0 = id.col << ce;
        let c1 = c0 + (1 << ce) - 1;
        let left = self.center(BeadId::new(r0, c0)).x - self.l;
        let right = self.center(BeadId::new(r0, c1)).x + self.l;
        (left, right)
    }

    /// Entry and exit poses of a meta-bead along its lane.
    pub fn meta_bead_entry_exit(&self, id: MetaBeadId, direction: i32) -> (Pose, Pose) {
        let (left, right) = self.meta_extent(id);
        let y = self.lane_y(id.phase, id.row);
        if direction == 1 {
            (
                Pose::new(left, y, heading_for(true)),
                Pose::new(right, y, heading_for(true)),
            )
        } else {
            (
                Pose::new(right, y, heading_for(false)),
                Pose::new(left, y, heading_for(false)),
            )
        }
    }

    /// Beads making up a meta-bead, restricted to the grid.
    pub fn members(&self, id: MetaBeadId) -> Vec<BeadId> {
        let (ce, re) = phase_exponents(id.phase);
        let mut out = Vec::new();
        for r in (id.row << re)..((id.row + 1) << re).min(self.row_count) {
            for c in (id.col << ce)..((id.col + 1) << ce).min(self.cols(r)) {
                out.push(BeadId::new(r, c));
            }
        }
        out
    }

    /// Histogram of point counts over beads fully inside the environment.
    pub fn occupancy_histogram(&self, points: &[Point]) -> Result<BTreeMap<usize, usize>> {
        let mut counts: BTreeMap<BeadId, usize> = self
            .ids()
            .filter(|&id| self.fully_inside(id))
            .map(|id| (id, 0))
            .collect();
        for &p in points {
            let id = self.locate(p)?;
            if let Some(c) = counts.get_mut(&id) {
                *c += 1;
            }
        }
        let mut hist = BTreeMap::new();
        for k in counts.into_values() {
            *hist.entry(k).or_insert(0) += 1;
        }
        Ok(hist)
    }
}
