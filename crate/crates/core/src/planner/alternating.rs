//! The alternating algorithm: take a Euclidean tour order, fly every other
//! edge as a straight segment and join the rest with shortest Dubins paths.

use std::f64::consts::TAU;

use super::tour::{TargetSet, Tour, TourBuilder, VisitPhase};
use crate::dubins::{shortest_path, DubinsPath, Pose, Rho};
use crate::geom::Point;

/// Number of uniformly spaced candidate headings for a free target.
pub const HEADING_CANDIDATES: usize = 16;

pub(crate) fn uniform_headings() -> impl Iterator<Item = f64> {
    (0..HEADING_CANDIDATES).map(|k| k as f64 * TAU / HEADING_CANDIDATES as f64)
}

/// Visiting order of `points` by nearest neighbour followed by
/// first-improvement 2-opt.
///
/// With `start` the order is a path leaving `start`; with `end` as well it
/// is a path from `start` to `end`, otherwise a closed cycle back to the
/// first node.
pub fn euclidean_order(points: &[Point], start: Option<Point>, end: Option<Point>) -> Vec<usize> {
    let m = points.len();
    if m == 0 {
        return Vec::new();
    }
    let mut used = vec![false; m];
    let mut order = Vec::with_capacity(m);
    let mut cur = match start {
        Some(p) => p,
        None => {
            used[0] = true;
            order.push(0);
            points[0]
        }
    };
    while order.len() < m {
        let mut best: Option<(f64, usize)> = None;
        for (i, p) in points.iter().enumerate() {
            if used[i] {
                continue;
            }
            let d = cur.distance(*p);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, i));
            }
        }
        let (_, i) = best.expect("an unused point remains");
        used[i] = true;
        order.push(i);
        cur = points[i];
    }

    // node sequence with fixed endpoints for 2-opt
    let mut nodes: Vec<(Option<usize>, Point)> = Vec::with_capacity(m + 2);
    if let Some(s) = start {
        nodes.push((None, s));
    }
    nodes.extend(order.iter().map(|&i| (Some(i), points[i])));
    let closed = end.is_none();
    if let Some(e) = end {
        nodes.push((None, e));
    }
    two_opt(&mut nodes, closed);
    nodes.into_iter().filter_map(|(i, _)| i).collect()
}

fn two_opt<T>(nodes: &mut [(T, Point)], closed: bool) {
    let len = nodes.len();
    if len < 4 {
        return;
    }
    let hi = if closed { len - 1 } else { len - 2 };
    let d = |a: Point, b: Point| a.distance(b);
    loop {
        let mut improved = false;
        for i in 1..hi {
            for j in i + 1..=hi {
                let next = if j + 1 == len { 0 } else { j + 1 };
                if next == 0 && i == 1 {
                    continue;
                }
                let (a, b) = (nodes[i - 1].1, nodes[i].1);
                let (c, e) = (nodes[j].1, nodes[next].1);
                let delta = d(a, c) + d(b, e) - d(a, b) - d(c, e);
                if delta < -1e-12 {
                    nodes[i..=j].reverse();
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
}

fn best_free_heading(prev: Pose, p: Point, next: Pose, rho: Rho) -> f64 {
    let candidates =
        uniform_headings().chain([prev.position().bearing_to(p), p.bearing_to(next.position())]);
    let mut best = (f64::INFINITY, 0.0);
    for theta in candidates {
        let pose = Pose::at(p, theta);
        let len = shortest_path(prev, pose, rho).length() + shortest_path(pose, next, rho).length();
        if len < best.0 {
            best = (len, theta);
        }
    }
    best.1
}

/// Flies `nodes` in the given order from the builder's pose: pairs
/// `(0, 1), (2, 3), …` are joined by straight segments, the gaps between
/// pairs by shortest Dubins paths. An unpaired last node gets the heading
/// that is cheapest with respect to `end`.
pub(crate) fn fly_order(
    builder: &mut TourBuilder,
    nodes: &[(usize, Point)],
    end: Pose,
    phase: VisitPhase,
) {
    let rho = builder.rho();
    for pair in nodes.chunks(2) {
        match *pair {
            [(ia, a), (ib, b)] => {
                let heading = a.bearing_to(b);
                builder.goto(Pose::at(a, heading));
                builder.visit(ia, phase, builder.length());
                builder.push(DubinsPath::straight(builder.pose(), a.distance(b), rho));
                builder.visit(ib, phase, builder.length());
            }
            [(ia, a)] => {
                let heading = best_free_heading(builder.pose(), a, end, rho);
                builder.goto(Pose::at(a, heading));
                builder.visit(ia, phase, builder.length());
            }
            _ => unreachable!("chunks of two"),
        }
    }
}

/// Open alternating path from the builder's pose through `nodes`, ordered
/// for a route that ends at `end`. The caller closes the route.
pub(crate) fn alternating_path(
    builder: &mut TourBuilder,
    nodes: &[(usize, Point)],
    end: Pose,
    phase: VisitPhase,
) {
    let pts: Vec<Point> = nodes.iter().map(|n| n.1).collect();
    let order = euclidean_order(&pts, Some(builder.pose().position()), Some(end.position()));
    let ordered: Vec<(usize, Point)> = order.into_iter().map(|i| nodes[i]).collect();
    fly_order(builder, &ordered, end, phase);
}

/// Closed tour through all targets by the alternating algorithm.
///
/// With a start pose the tour leaves from and returns to it; otherwise it
/// starts at the first node of the Euclidean order.
pub fn alternating_algorithm(targets: &TargetSet, rho: Rho, start: Option<Pose>) -> Tour {
    alternating_open(targets, rho, start).finish(true)
}

/// The alternating route before its closing leg.
pub(crate) fn alternating_open(targets: &TargetSet, rho: Rho, start: Option<Pose>) -> TourBuilder {
    let nodes: Vec<(usize, Point)> = targets.points().iter().copied().enumerate().collect();
    match start {
        Some(origin) => {
            let mut b = TourBuilder::new(origin, rho);
            alternating_path(&mut b, &nodes, origin, VisitPhase::Fallback);
            b
        }
        None => {
            let order = euclidean_order(targets.points(), None, None);
            let ordered: Vec<(usize, Point)> = order.into_iter().map(|i| nodes[i]).collect();
            let Some(&(_, first)) = ordered.first() else {
                return TourBuilder::new(Pose::default(), rho);
            };
            let heading = ordered.get(1).map_or(0.0, |&(_, p)| first.bearing_to(p));
            let origin = Pose::at(first, heading);
            let mut b = TourBuilder::new(origin, rho);
            fly_order(&mut b, &ordered, origin, VisitPhase::Fallback);
            b
        }
    }
}
