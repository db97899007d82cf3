//! Nearest-target-first fallback measured in Dubins length.

use super::alternating::uniform_headings;
use super::tour::{TargetSet, Tour, TourBuilder, VisitPhase};
use crate::dubins::{shortest_path, Pose, Rho};
use crate::geom::Point;

/// Repeatedly flies to the unvisited node with the shortest Dubins
/// approach over the candidate headings. Ties go to the smaller index.
pub(crate) fn greedy_path(builder: &mut TourBuilder, nodes: &[(usize, Point)], phase: VisitPhase) {
    let rho = builder.rho();
    let mut remaining: Vec<(usize, Point)> = nodes.to_vec();
    remaining.sort_by_key(|n| n.0);
    while !remaining.is_empty() {
        let from = builder.pose();
        let mut best: Option<(f64, usize, Pose)> = None;
        for (k, &(_, p)) in remaining.iter().enumerate() {
            for theta in uniform_headings() {
                let pose = Pose::at(p, theta);
                let len = shortest_path(from, pose, rho).length();
                if best.is_none_or(|b| len < b.0) {
                    best = Some((len, k, pose));
                }
            }
        }
        let (_, k, pose) = best.expect("remaining is non-empty");
        let (idx, _) = remaining.remove(k);
        builder.goto(pose);
        builder.visit(idx, phase, builder.length());
    }
}

/// Closed greedy tour from `start` through all targets.
pub fn greedy_fallback(targets: &TargetSet, start: Pose, rho: Rho) -> Tour {
    let nodes: Vec<(usize, Point)> = targets.points().iter().copied().enumerate().collect();
    let mut b = TourBuilder::new(start, rho);
    greedy_path(&mut b, &nodes, VisitPhase::Fallback);
    b.finish(true)
}
