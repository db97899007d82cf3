//! Closed tours made of Dubins paths, incremental assembly and validation.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, TAU};

use crate::dubins::{shortest_path, DubinsPath, Pose, Rho, Steer};
use crate::error::{Error, Result};
use crate::geom::{normalize_angle, Point};
use crate::tiling::Environment;

/// Tolerance for pose continuity and closure.
pub const CONTINUITY_TOL: f64 = 1e-9;

/// Default visiting tolerance.
pub const EPS_VISIT: f64 = 1e-6;

/// Target points with stable zero-based indices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TargetSet {
    points: Vec<Point>,
}

impl TargetSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinitePose);
        }
        Ok(Self { points })
    }

    /// Targets that must all lie in `env`.
    pub fn within(points: Vec<Point>, env: &Environment) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| !env.contains(**p)) {
            return Err(Error::PointOutsideEnvironment { x: p.x, y: p.y });
        }
        Self::new(points)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, i: usize) -> Point {
        self.points[i]
    }
}

/// When a target was serviced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VisitPhase {
    Phase(u32),
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Visit {
    pub phase: VisitPhase,
    /// Arc length along the tour at which the target is passed.
    pub position: f64,
}

/// An ordered chain of Dubins paths starting at `origin`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    pub origin: Pose,
    pub segments: Vec<DubinsPath>,
    pub visits: BTreeMap<usize, Visit>,
    pub closed: bool,
}

impl Tour {
    pub fn length(&self) -> f64 {
        self.segments.iter().map(|s| s.length()).sum()
    }

    pub fn end(&self) -> Pose {
        self.segments.last().map_or(self.origin, |s| s.end())
    }

    /// Pose at arc length `s` from the origin.
    pub fn pose_at(&self, s: f64) -> Pose {
        let mut rest = s;
        for seg in &self.segments {
            let len = seg.length();
            if rest <= len {
                return seg.pose_at(rest);
            }
            rest -= len;
        }
        self.end()
    }
}

/// Appends paths while tracking the current pose, the running length and
/// visit records. Consecutive collinear straight pieces are merged.
#[derive(Debug, Clone)]
pub struct TourBuilder {
    origin: Pose,
    pose: Pose,
    rho: Rho,
    length: f64,
    segments: Vec<DubinsPath>,
    visits: BTreeMap<usize, Visit>,
}

impl TourBuilder {
    pub fn new(origin: Pose, rho: Rho) -> Self {
        Self {
            origin,
            pose: origin,
            rho,
            length: 0.0,
            segments: Vec::new(),
            visits: BTreeMap::new(),
        }
    }

    pub fn pose(&self) -> Pose {
        self.pose
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn rho(&self) -> Rho {
        self.rho
    }

    pub fn push(&mut self, path: DubinsPath) {
        let len = path.length();
        if len <= 0.0 {
            return;
        }
        if path.is_straight() {
            if let Some(last) = self.segments.last_mut() {
                if last.is_straight() && last.start.theta == path.start.theta {
                    last.params = [0.0, last.length() + len, 0.0];
                    self.pose = last.end();
                    self.length += len;
                    return;
                }
            }
        }
        self.pose = path.end();
        self.length += len;
        self.segments.push(path);
    }

    pub fn extend<I: IntoIterator<Item = DubinsPath>>(&mut self, paths: I) {
        for p in paths {
            self.push(p);
        }
    }

    /// Flies the shortest path to `target` unless already there.
    pub fn goto(&mut self, target: Pose) {
        if self.pose.mismatch(&target) <= 1e-12 {
            return;
        }
        let path = shortest_path(self.pose, target, self.rho);
        self.push(path);
    }

    /// Records a visit at arc length `position` from the origin.
    pub fn visit(&mut self, target: usize, phase: VisitPhase, position: f64) {
        self.visits.insert(target, Visit { phase, position });
    }

    pub fn finish(mut self, close: bool) -> Tour {
        if close {
            self.goto(self.origin);
        }
        Tour {
            origin: self.origin,
            segments: self.segments,
            visits: self.visits,
            closed: close,
        }
    }
}

/// Problems found by [`validate_tour`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    /// `(segment index, mismatch)` where a segment does not start at the
    /// previous segment's end (index 0 is checked against the origin).
    pub continuity: Vec<(usize, f64)>,
    /// Segments with a turn radius below `rho` or invalid parameters.
    pub curvature: Vec<usize>,
    /// Targets the tour does not pass within the visiting tolerance.
    pub unvisited: Vec<usize>,
    /// Distance between the final pose and the origin.
    pub closure_error: f64,
    pub closed: bool,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.continuity.is_empty()
            && self.curvature.is_empty()
            && self.unvisited.is_empty()
            && (!self.closed || self.closure_error <= CONTINUITY_TOL)
    }
}

/// Distance from `p` to one primitive segment starting at `pose`.
fn distance_to_primitive(pose: Pose, steer: Steer, param: f64, rho: f64, p: Point) -> f64 {
    let (s, c) = pose.theta.sin_cos();
    match steer {
        Steer::Straight => {
            let t = ((p.x - pose.x) * c + (p.y - pose.y) * s).clamp(0.0, param);
            Point::new(pose.x + t * c, pose.y + t * s).distance(p)
        }
        Steer::Left | Steer::Right => {
            let sign = if steer == Steer::Left { 1.0 } else { -1.0 };
            let centre = Point::new(pose.x - sign * rho * s, pose.y + sign * rho * c);
            let a0 = pose.theta - sign * FRAC_PI_2;
            let ap = centre.bearing_to(p);
            let swept = normalize_angle(sign * (ap - a0));
            if param >= TAU || swept <= param {
                (centre.distance(p) - rho).abs()
            } else {
                let end = pose.advance(steer, param, rho).position();
                pose.position().distance(p).min(end.distance(p))
            }
        }
    }
}

/// Exact minimum distance from `p` to a Dubins path.
pub fn distance_to_path(path: &DubinsPath, p: Point) -> f64 {
    let mut pose = path.start;
    let mut best = f64::INFINITY;
    for seg in path.segments() {
        best = best.min(distance_to_primitive(
            pose, seg.steer, seg.param, path.rho, p,
        ));
        pose = pose.advance(seg.steer, seg.param, path.rho);
    }
    best
}

/// Checks continuity, curvature, target coverage and closure.
pub fn validate_tour(
    tour: &Tour,
    targets: &TargetSet,
    rho: Rho,
    eps_visit: f64,
) -> ValidationReport {
    let mut report = ValidationReport {
        closed: tour.closed,
        ..Default::default()
    };
    let mut prev = tour.origin;
    for (i, seg) in tour.segments.iter().enumerate() {
        let gap = prev.mismatch(&seg.start);
        if gap > CONTINUITY_TOL {
            report.continuity.push((i, gap));
        }
        let params_ok = seg.params.iter().all(|v| v.is_finite() && *v >= 0.0);
        if seg.rho < rho.get() - CONTINUITY_TOL || !params_ok {
            report.curvature.push(i);
        }
        prev = seg.end();
    }
    report.closure_error = prev.mismatch(&tour.origin);

    for (i, &p) in targets.points().iter().enumerate() {
        let recorded = tour
            .visits
            .get(&i)
            .is_some_and(|v| tour.pose_at(v.position).position().distance(p) <= eps_visit);
        let covered = recorded
            || tour
                .segments
                .iter()
                .any(|seg| distance_to_path(seg, p) <= eps_visit);
        if !covered {
            report.unvisited.push(i);
        }
    }
    report
}
