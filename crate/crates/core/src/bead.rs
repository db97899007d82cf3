//! The bead: a thin almond-shaped region between two points `2l` apart
//! through every interior point of which a bounded-curvature path passes
//! without leaving the region.
//!
//! In bead-local coordinates the axis is the x axis, the endpoints are
//! `(±l, 0)` and the upper boundary is the symmetric `LRL` curve of radius
//! `rho` with sweeps `(φ, 2φ, φ)`, `sin φ = l / 2ρ`. The lower boundary is its
//! mirror image. The apex sits at height `w/2` and the enclosed area is
//! exactly `l·w`.

use std::f64::consts::PI;

use crate::dubins::{pack_segments, DubinsPath, Pose, Rho, Segment, Steer, Word};
use crate::error::{Error, Result};
use crate::geom::Point;

/// Outward tolerance used when accepting targets on the boundary.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

fn check_half_length(l: f64, rho: Rho) -> Result<()> {
    if l.is_finite() && l > 0.0 && l <= 2.0 * rho.get() {
        Ok(())
    } else {
        Err(Error::InvalidHalfLength {
            half_length: l,
            rho: rho.get(),
        })
    }
}

/// Maximum thickness `w(l) = 4ρ(1 − √(1 − l²/4ρ²))`.
///
/// Evaluated in the equivalent form `(l²/ρ) / (1 + √(1 − l²/4ρ²))`, which
/// avoids cancellation for `l ≪ ρ`.
pub fn bead_width(l: f64, rho: Rho) -> Result<f64> {
    check_half_length(l, rho)?;
    let r = rho.get();
    let s = (1.0 - l * l / (4.0 * r * r)).max(0.0).sqrt();
    Ok((l * l / r) / (1.0 + s))
}

/// Area `l·w(l)`.
pub fn bead_area(l: f64, rho: Rho) -> Result<f64> {
    Ok(l * bead_width(l, rho)?)
}

/// The unique `l ∈ (0, 2ρ]` with `bead_area(l) = area`, by bisection.
pub fn solve_bead_half_length(area: f64, rho: Rho) -> Result<f64> {
    let r = rho.get();
    let max_area = 8.0 * r * r;
    if !(area.is_finite() && area > 0.0 && area <= max_area) {
        return Err(Error::AreaOutOfRange { area, rho: r });
    }
    if area == max_area {
        return Ok(2.0 * r);
    }
    let area_of = |l: f64| l * bead_width(l, rho).expect("l in range");
    // the small-l expansion l³/2ρ overestimates the area, so its root is a
    // lower bracket
    let mut lo = (2.0 * r * area).cbrt().min(2.0 * r) * 0.5;
    while area_of(lo) > area {
        lo *= 0.5;
    }
    let mut hi = 2.0 * r;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if area_of(mid) < area {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `ρ − √(ρ² − d²)` without cancellation.
fn sag(d: f64, rho: f64) -> f64 {
    let d2 = d * d;
    d2 / (rho + (rho * rho - d2).max(0.0).sqrt())
}

/// A bead placed in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bead {
    pub center: Point,
    pub half_length: f64,
    pub rho: Rho,
    /// Direction of the axis `p_− → p_+`, in radians.
    pub orientation: f64,
    width: f64,
}

impl Bead {
    pub fn new(center: Point, half_length: f64, rho: Rho, orientation: f64) -> Result<Self> {
        let width = bead_width(half_length, rho)?;
        Ok(Self {
            center,
            half_length,
            rho,
            orientation,
            width,
        })
    }

    /// Axis-aligned bead.
    pub fn horizontal(center: Point, half_length: f64, rho: Rho) -> Result<Self> {
        Self::new(center, half_length, rho, 0.0)
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn area(&self) -> f64 {
        self.half_length * self.width
    }

    fn axis(&self) -> (f64, f64) {
        if self.orientation == 0.0 {
            (1.0, 0.0)
        } else {
            (self.orientation.cos(), self.orientation.sin())
        }
    }

    pub fn p_minus(&self) -> Point {
        let (c, s) = self.axis();
        Point::new(
            self.center.x - self.half_length * c,
            self.center.y - self.half_length * s,
        )
    }

    pub fn p_plus(&self) -> Point {
        let (c, s) = self.axis();
        Point::new(
            self.center.x + self.half_length * c,
            self.center.y + self.half_length * s,
        )
    }

    /// Coordinates of `p` in the bead frame.
    pub fn to_local(&self, p: Point) -> Point {
        let dx = p.x - self.center.x;
        let dy = p.y - self.center.y;
        if self.orientation == 0.0 {
            return Point::new(dx, dy);
        }
        let (c, s) = self.axis();
        Point::new(c * dx + s * dy, -s * dx + c * dy)
    }

    pub fn to_world(&self, q: Point) -> Point {
        if self.orientation == 0.0 {
            return Point::new(self.center.x + q.x, self.center.y + q.y);
        }
        let (c, s) = self.axis();
        Point::new(
            self.center.x + c * q.x - s * q.y,
            self.center.y + s * q.x + c * q.y,
        )
    }

    /// Half-thickness of the bead at axial distance `u` from the centre.
    /// Zero outside `[0, l]`.
    pub fn half_height(&self, u: f64) -> f64 {
        let l = self.half_length;
        let u = u.abs();
        if u > l {
            return 0.0;
        }
        let r = self.rho.get();
        if u <= 0.5 * l {
            0.5 * self.width - sag(u, r)
        } else {
            sag(l - u, r)
        }
    }

    /// Signed distance-like margin: nonnegative exactly on the closed region.
    pub fn margin(&self, p: Point) -> f64 {
        let q = self.to_local(p);
        let u = q.x.abs();
        if u <= self.half_length {
            self.half_height(u) - q.y.abs()
        } else {
            -(u - self.half_length) - q.y.abs()
        }
    }

    /// Closed-set membership.
    pub fn contains(&self, p: Point) -> bool {
        self.margin(p) >= 0.0
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        let (c, s) = self.axis();
        let (l, h) = (self.half_length, 0.5 * self.width);
        let ex = l * c.abs() + h * s.abs();
        let ey = l * s.abs() + h * c.abs();
        (
            Point::new(self.center.x - ex, self.center.y - ey),
            Point::new(self.center.x + ex, self.center.y + ey),
        )
    }

    /// Sweep angle `φ` of the boundary arcs, `sin φ = l / 2ρ`.
    pub fn boundary_sweep(&self) -> f64 {
        (self.half_length / (2.0 * self.rho.get())).min(1.0).asin()
    }

    /// Upper and lower boundary curves, both running `p_− → p_+`.
    pub fn outline(&self) -> [DubinsPath; 2] {
        let phi = self.boundary_sweep();
        let start = Pose::at(self.p_minus(), self.orientation);
        [
            DubinsPath::new(start, self.rho, Word::Lrl, [phi, 2.0 * phi, phi]),
            DubinsPath::new(start, self.rho, Word::Rlr, [phi, 2.0 * phi, phi]),
        ]
    }

    /// A bounded-curvature path from one endpoint to the other through
    /// `target`, staying inside the bead. `direction = +1` travels
    /// `p_− → p_+`, any other value travels `p_+ → p_−`.
    pub fn traversal(&self, target: Point, direction: i32) -> Result<Traversal> {
        traversal_path(self, target, direction)
    }
}

/// A traversal through one bead: consecutive pieces and the arc length at
/// which the target is passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Traversal {
    pub pieces: Vec<DubinsPath>,
    pub target_offset: f64,
    start: Pose,
}

impl Traversal {
    pub fn length(&self) -> f64 {
        self.pieces.iter().map(|p| p.length()).sum()
    }

    pub fn start(&self) -> Pose {
        self.start
    }

    pub fn end(&self) -> Pose {
        self.pieces.last().map_or(self.start, |p| p.end())
    }

    /// Pose at arc length `s` along the whole traversal.
    pub fn pose_at(&self, s: f64) -> Pose {
        let mut rest = s;
        for p in &self.pieces {
            let len = p.length();
            if rest <= len {
                return p.pose_at(rest);
            }
            rest -= len;
        }
        self.end()
    }
}

/// Height of the family curve `S, L ψ, R 2ψ, L ψ` ending at `(l, 0)`.
fn family_height(x: f64, psi: f64, l: f64, rho: f64) -> f64 {
    let sp = psi.sin();
    let xs = l - 4.0 * rho * sp;
    if x <= xs {
        0.0
    } else if x <= xs + rho * sp {
        sag(x - xs, rho)
    } else if x <= l - rho * sp {
        let half = (0.5 * psi).sin();
        4.0 * rho * half * half - sag(x - (xs + 2.0 * rho * sp), rho)
    } else {
        sag(l - x, rho)
    }
}

/// Arc length along the family curve at which abscissa `x` is reached.
fn family_offset(x: f64, psi: f64, l: f64, rho: f64) -> f64 {
    let sp = psi.sin();
    let xs = l - 4.0 * rho * sp;
    let a = 2.0 * l - 4.0 * rho * sp;
    let asin = |v: f64| v.clamp(-1.0, 1.0).asin();
    if x <= xs {
        x + l
    } else if x <= xs + rho * sp {
        a + rho * asin((x - xs) / rho)
    } else if x <= l - rho * sp {
        let h = asin((xs + 2.0 * rho * sp - x) / rho);
        a + rho * psi + rho * (psi - h)
    } else {
        let h = asin((x - l) / rho);
        a + 3.0 * rho * psi + rho * (h + psi)
    }
}

/// Path through `target` from one bead endpoint to the other.
///
/// The path is a straight run along the axis followed by a symmetric
/// S-shaped excursion `L ψ, R 2ψ, L ψ` that returns to the axis at the far
/// endpoint (reflected as needed for the target's quadrant). `ψ ∈ [0, φ]` is
/// chosen by bisection so that the excursion passes through the target; at
/// `ψ = φ` the excursion is the boundary itself. Length is
/// `2l − 4ρ sin ψ + 4ρψ ≤ 4ρ asin(l/2ρ)`.
pub fn traversal_path(bead: &Bead, target: Point, direction: i32) -> Result<Traversal> {
    if bead.margin(target) < -MEMBERSHIP_TOL {
        return Err(Error::TargetOutsideBead {
            x: target.x,
            y: target.y,
        });
    }
    let l = bead.half_length;
    let r = bead.rho.get();
    let forward = direction == 1;
    let local = bead.to_local(target);
    let (px, py) = if forward {
        (local.x, local.y)
    } else {
        (-local.x, -local.y)
    };
    let ax = px.abs().min(l);
    let ay = py.abs().min(bead.half_height(ax));

    let phi = bead.boundary_sweep();
    let psi = if ay <= 0.0 {
        0.0
    } else {
        let (mut lo, mut hi) = (0.0, phi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if family_height(ax, mid, l, r) < ay {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    };

    let straight = 2.0 * l - 4.0 * r * psi.sin();
    let mut chain = vec![
        Segment::new(Steer::Straight, straight.max(0.0)),
        Segment::new(Steer::Left, psi),
        Segment::new(Steer::Right, 2.0 * psi),
        Segment::new(Steer::Left, psi),
    ];
    let total = straight.max(0.0) + 4.0 * r * psi;
    let mut offset = family_offset(ax, psi, l, r);
    if px < 0.0 {
        chain.reverse();
        offset = total - offset;
    }
    if py < 0.0 {
        for s in &mut chain {
            s.steer = s.steer.flipped();
        }
    }
    let heading = bead.orientation + if forward { 0.0 } else { PI };
    let from = if forward {
        bead.p_minus()
    } else {
        bead.p_plus()
    };
    let start = Pose::at(from, heading);
    let pieces = pack_segments(start, bead.rho, &chain);
    Ok(Traversal {
        pieces,
        target_offset: offset.clamp(0.0, total),
        start,
    })
}

/// Upper bound `4ρ asin(l/2ρ)` on traversal length.
pub fn traversal_bound(l: f64, rho: Rho) -> f64 {
    4.0 * rho.get() * (l / (2.0 * rho.get())).min(1.0).asin()
}
