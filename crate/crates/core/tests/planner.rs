use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use bead_tsp::experiments::generate_points;
use bead_tsp::planner::{VisitPhase, EPS_VISIT};
use bead_tsp::{
    alternating_algorithm, build_tiling, greedy_fallback, recursive_bead_tiling,
    recursive_bead_tiling_with, validate_tour, Environment, Fallback, PlannerConfig, Point, Pose,
    Rho, TargetSet, Tour,
};
use proptest::prelude::*;

fn rho(v: f64) -> Rho {
    Rho::new(v).unwrap()
}

// seed 42, n = 1000, ρ = 0.05 on the unit square
const SEED_42_TOTAL: f64 = 648.331_834_650_259_3;

fn assert_clean(tour: &Tour, targets: &TargetSet, r: Rho) {
    let report = validate_tour(tour, targets, r, EPS_VISIT);
    assert!(report.is_clean(), "{report:?}");
}

#[test]
fn single_target_at_centre() {
    let env = Environment::unit();
    let targets = TargetSet::new(vec![Point::new(0.5, 0.5)]).unwrap();
    let (tour, stats) = recursive_bead_tiling(&targets, env, rho(1.0)).unwrap();
    assert_clean(&tour, &targets, rho(1.0));
    assert_eq!(stats.leftover, 0);
    assert_eq!(stats.served(), 1);
    assert_eq!(tour.origin, Pose::new(0.0, 1.0, 0.0));
}

#[test]
fn distinct_beads_are_served_in_phase_one() {
    let env = Environment::unit();
    let n = 400;
    let r = rho(0.05);
    let grid = build_tiling(env, n, r).unwrap();
    let pts: Vec<Point> = grid
        .ids()
        .filter(|&id| grid.fully_inside(id))
        .take(n)
        .map(|id| grid.center(id))
        .collect();
    assert_eq!(pts.len(), n);
    let targets = TargetSet::new(pts).unwrap();
    let (tour, stats) = recursive_bead_tiling(&targets, env, r).unwrap();
    assert_clean(&tour, &targets, r);
    assert_eq!(stats.leftover, 0);
    assert_eq!(stats.phases[0].served, n);
    assert!(tour
        .visits
        .values()
        .all(|v| v.phase == VisitPhase::Phase(1)));
}

#[test]
fn seed_42_regression() {
    let env = Environment::unit();
    let targets = generate_points(1000, env, 42).unwrap();
    let (tour, stats) = recursive_bead_tiling(&targets, env, rho(0.05)).unwrap();
    assert_clean(&tour, &targets, rho(0.05));
    assert_eq!(stats.leftover, 0);
    assert!(
        (tour.length() - SEED_42_TOTAL).abs() < 1e-6,
        "{}",
        tour.length()
    );
    assert!((stats.total_length() - tour.length()).abs() < 1e-9);
}

#[test]
fn alternating_two_collinear_targets() {
    let targets = TargetSet::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)]).unwrap();
    let r = rho(0.01);
    let tour = alternating_algorithm(&targets, r, None);
    assert_clean(&tour, &targets, r);
    // out and back, plus a turn-around at each end
    let turn = 7.0 * PI / 3.0 * 0.01;
    assert!(tour.length() >= 2.0);
    assert!(
        tour.length() <= 2.0 + 2.0 * turn + 1e-9,
        "{}",
        tour.length()
    );
}

#[test]
fn alternating_single_target_from_start() {
    let targets = TargetSet::new(vec![Point::new(0.5, 0.5)]).unwrap();
    let r = rho(0.1);
    let start = Pose::new(0.0, 0.0, 0.0);
    let tour = alternating_algorithm(&targets, r, Some(start));
    assert_clean(&tour, &targets, r);
    assert_eq!(tour.origin, start);
    assert!(tour.length() >= 2.0 * 0.5f64.hypot(0.5));
}

#[test]
fn alternating_square_is_near_perimeter() {
    let pts = vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(0.0, 1.0),
    ];
    let targets = TargetSet::new(pts).unwrap();
    let r = rho(0.01);
    let tour = alternating_algorithm(&targets, r, None);
    assert_clean(&tour, &targets, r);
    assert!(tour.length() >= 4.0);
    assert!(
        tour.length() <= 4.0 + 10.0 * 0.01 * 2.0 * PI,
        "{}",
        tour.length()
    );
}

#[test]
fn greedy_visits_a_line_in_order() {
    let xs = [3.0, 1.0, 4.0, 2.0];
    let targets = TargetSet::new(xs.iter().map(|&x| Point::new(x, 0.0)).collect()).unwrap();
    let r = rho(0.1);
    let tour = greedy_fallback(&targets, Pose::new(0.0, 0.0, 0.0), r);
    assert_clean(&tour, &targets, r);
    let mut order: Vec<(f64, f64)> = tour
        .visits
        .iter()
        .map(|(&i, v)| (v.position, xs[i]))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let visited: Vec<f64> = order.into_iter().map(|(_, x)| x).collect();
    assert_eq!(visited, vec![1.0, 2.0, 3.0, 4.0]);
}

#[test]
fn validation_flags_broken_tours() {
    let env = Environment::unit();
    let targets = generate_points(200, env, 9).unwrap();
    let r = rho(0.05);
    let (tour, _) = recursive_bead_tiling(&targets, env, r).unwrap();
    assert_clean(&tour, &targets, r);

    let mut cut = tour.clone();
    let mid = cut.segments.len() / 2;
    cut.segments.remove(mid);
    let report = validate_tour(&cut, &targets, r, EPS_VISIT);
    assert!(!report.continuity.is_empty());
    assert!(!report.is_clean());

    let fewer = TargetSet::new(targets.points()[..199].to_vec()).unwrap();
    let (short, _) = recursive_bead_tiling(&fewer, env, r).unwrap();
    let report = validate_tour(&short, &targets, r, EPS_VISIT);
    assert_eq!(report.unvisited, vec![199]);

    let tighter = rho(0.06);
    assert!(!validate_tour(&tour, &targets, tighter, EPS_VISIT)
        .curvature
        .is_empty());
}

#[test]
fn tiny_instances_fall_back_to_alternating() {
    let env = Environment::unit();
    let r = rho(0.05);
    let targets = generate_points(5, env, 1).unwrap();
    let (tour, stats) = recursive_bead_tiling(&targets, env, r).unwrap();
    assert_clean(&tour, &targets, r);
    assert!(stats.phases.is_empty());
    assert_eq!(stats.leftover, 5);
    assert!(stats.half_length.is_none());
    assert!((stats.total_length() - tour.length()).abs() < 1e-9);
}

#[test]
fn greedy_fallback_config_is_valid() {
    let env = Environment::new(2.0, 1.0).unwrap();
    let r = rho(0.05);
    let targets = generate_points(800, env, 3).unwrap();
    let config = PlannerConfig {
        fallback: Fallback::Greedy,
        phases: Some(2),
    };
    let (tour, stats) = recursive_bead_tiling_with(&targets, env, r, &config).unwrap();
    assert_clean(&tour, &targets, r);
    assert_eq!(stats.phases.len(), 2);
    assert!(stats.leftover > 0);
    assert!(stats.fallback_length > 0.0);
}

#[test]
fn rejects_bad_inputs() {
    let env = Environment::unit();
    let outside = TargetSet::new(vec![Point::new(1.5, 0.5)]).unwrap();
    assert!(recursive_bead_tiling(&outside, env, rho(0.1)).is_err());
    let empty = TargetSet::new(vec![]).unwrap();
    assert!(recursive_bead_tiling(&empty, env, rho(0.1)).is_err());
    assert!(TargetSet::new(vec![Point::new(f64::NAN, 0.0)]).is_err());
}

/// Checks the structural invariants of a planned tour.
fn check_invariants(n: usize, seed: u64, r: f64, w: f64, h: f64) -> Result<(), TestCaseError> {
    let env = Environment::new(w, h).unwrap();
    let r = rho(r);
    let targets = generate_points(n, env, seed).unwrap();
    let (tour, stats) = recursive_bead_tiling(&targets, env, r).unwrap();
    let report = validate_tour(&tour, &targets, r, EPS_VISIT);
    prop_assert!(report.is_clean(), "{:?}", report);
    prop_assert_eq!(tour.visits.len(), n);
    prop_assert_eq!(stats.served() + stats.leftover, n);

    let (again, _) = recursive_bead_tiling(&targets, env, r).unwrap();
    prop_assert_eq!(again.length().to_bits(), tour.length().to_bits());

    let Ok(grid) = build_tiling(env, n, r) else {
        return Ok(());
    };
    // at most one target per meta-bead per phase, phases in tour order
    let mut seen: BTreeMap<(u32, usize, usize), usize> = BTreeMap::new();
    let mut by_position: Vec<(f64, u32)> = Vec::new();
    for (&i, v) in &tour.visits {
        let phase = match v.phase {
            VisitPhase::Phase(p) => p,
            VisitPhase::Fallback => u32::MAX,
        };
        by_position.push((v.position, phase));
        if phase == u32::MAX {
            continue;
        }
        let m = grid.meta_bead_of(grid.locate(targets.get(i)).unwrap(), phase);
        *seen.entry((phase, m.row, m.col)).or_default() += 1;
    }
    prop_assert!(seen.values().all(|&c| c == 1));
    by_position.sort_by(|a, b| a.0.total_cmp(&b.0));
    prop_assert!(by_position.windows(2).all(|w| w[0].1 <= w[1].1));
    // recount from the visit record what each phase saw at its start
    let phase_of = |i: usize| match tour.visits[&i].phase {
        VisitPhase::Phase(p) => p,
        VisitPhase::Fallback => u32::MAX,
    };
    for rec in &stats.phases {
        let waiting: Vec<usize> = (0..n).filter(|&i| phase_of(i) >= rec.phase).collect();
        let beads: BTreeSet<_> = waiting
            .iter()
            .map(|&i| grid.locate(targets.get(i)).unwrap())
            .collect();
        let metas: BTreeSet<_> = beads
            .iter()
            .map(|&b| grid.meta_bead_of(b, rec.phase))
            .collect();
        prop_assert_eq!(rec.nonempty_beads, beads.len());
        prop_assert_eq!(rec.served, metas.len());
        prop_assert!(rec.served <= rec.meta_beads);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn planner_invariants(
        n in 1usize..600,
        seed in any::<u64>(),
        r in 0.02..0.3f64,
        w in 0.5..2.0f64,
        h in 0.5..2.0f64,
    ) {
        check_invariants(n, seed, r, w, h)?;
    }
}
