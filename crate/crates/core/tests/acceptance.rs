//! Acceptance suite: one PASS/FAIL line per criterion.

mod support;

use std::f64::consts::PI;
use std::process::ExitCode;

use bead_tsp::bead::traversal_bound;
use bead_tsp::bounds::{beta, beta_recursion, istar, odd_phase_bounds, DEFAULT_SLACK};
use bead_tsp::experiments::{
    fit_exponent, generate_points, leftover_curve, phase_occupancy_report, sweep, SweepConfig,
    TrialResult,
};
use bead_tsp::{
    bead_area, bead_width, build_tiling, shortest_path, word_length, Bead, Environment, Fallback,
    Point, Pose, Rho, Word,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::oracle;

const SCALING_NS: [usize; 6] = [250, 500, 1000, 2000, 4000, 8000];
const SCALING_TRIALS: usize = 10;
const SCALING_RHO: f64 = 0.05;
const SLOPE_RANGE: (f64, f64) = (0.55, 0.80);
const LEFTOVER_FRACTION: f64 = 0.95;
const OCCUPANCY_NS: [usize; 2] = [4096, 8192];
const OCCUPANCY_TRIALS: usize = 20;
const OCCUPANCY_FRACTION: f64 = 0.9;
const CLOSED_FORM_TOL: f64 = 1e-12;
const MC_SAMPLES: usize = 1_000_000;
const MC_SIGMAS: f64 = 3.0;
const TRAVERSAL_TARGETS: usize = 10_000;
const TRAVERSAL_TOL: f64 = 1e-9;
const POSE_PAIRS: usize = 1000;
const ORACLE_TOL: f64 = 1e-6;
const SYMMETRY_TOL: f64 = 1e-9;
const LOCATE_POINTS: usize = 100_000;
const POISSON_N: usize = 100_000;
const POISSON_TOL: f64 = 0.01;
const BASE_SEED: u64 = 20_240_101;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rho(v: f64) -> Rho {
    Rho::new(v).unwrap()
}

fn scaling_sweep() -> Vec<TrialResult> {
    let config = SweepConfig {
        ns: SCALING_NS.to_vec(),
        trials: SCALING_TRIALS,
        env: Environment::unit(),
        rho: rho(SCALING_RHO),
        base_seed: BASE_SEED,
        fallback: Fallback::Alternating,
    };
    sweep(&config).expect("scaling sweep")
}

fn scaling_exponent(results: &[TrialResult]) -> Outcome {
    let fit = fit_exponent(results).expect("six sizes");
    let pass = fit.slope >= SLOPE_RANGE.0 && fit.slope <= SLOPE_RANGE.1;
    outcome(
        pass,
        format!(
            "slope {:.4} in [{}, {}], rms residual {:.4}",
            fit.slope, SLOPE_RANGE.0, SLOPE_RANGE.1, fit.residual
        ),
    )
}

fn leftover_bound(results: &[TrialResult]) -> Outcome {
    let curve = leftover_curve(results);
    let within: usize = curve.iter().map(|p| p.within_limit).sum();
    let total: usize = curve.iter().map(|p| p.trials).sum();
    let frac = within as f64 / total as f64;
    let mean_at = |n| curve.iter().find(|p| p.n == n).map_or(0.0, |p| p.mean);
    let (lo, hi) = (mean_at(1000), mean_at(8000));
    let factor = 2.0 * (8000f64).log2() / (1000f64).log2();
    let growth_ok = hi <= lo * factor;
    let max = curve.iter().map(|p| p.max).max().unwrap_or(0);
    outcome(
        frac >= LEFTOVER_FRACTION && growth_ok,
        format!(
            "{within}/{total} trials within 24 log2 n (need {LEFTOVER_FRACTION}), max leftover {max}, \
             mean at 8000 = {hi:.2} vs {factor:.3} x mean at 1000 = {lo:.2}"
        ),
    )
}

fn phase_occupancy() -> Outcome {
    let config = SweepConfig {
        ns: OCCUPANCY_NS.to_vec(),
        trials: OCCUPANCY_TRIALS,
        env: Environment::unit(),
        rho: rho(SCALING_RHO),
        base_seed: BASE_SEED ^ 1,
        fallback: Fallback::Alternating,
    };
    let results = sweep(&config).expect("occupancy sweep");
    let reports = phase_occupancy_report(&results).expect("n ≥ 2");
    let mut pass = true;
    let mut parts = Vec::new();
    for r in &reports {
        let frac = r.all_within as f64 / r.trials as f64;
        pass &= frac >= OCCUPANCY_FRACTION;
        let worst = r
            .rows
            .iter()
            .map(|row| row.max_v as f64 / row.beta_n)
            .fold(0.0, f64::max);
        parts.push(format!(
            "n = {}: i* = {}, {}/{} trials within, worst max v_i / beta_i n = {:.3}",
            r.n, r.istar, r.all_within, r.trials, worst
        ));
    }
    outcome(pass, parts.join("; "))
}

fn bound_domination(results: &[TrialResult]) -> Outcome {
    let env = Environment::unit();
    let mut pass = true;
    let mut worst = (0.0, 0usize, 0u32);
    let mut worst_total: f64 = 0.0;
    let mut failures = Vec::new();
    for r in results {
        let table = odd_phase_bounds(env, rho(SCALING_RHO), r.n).expect("tiling");
        for row in &table.rows {
            let measured = r.stats.phase_length(row.phase).unwrap_or(0.0);
            let ratio = measured / row.total;
            if ratio > worst.0 {
                worst = (ratio, r.n, row.phase);
            }
            if measured > row.total * DEFAULT_SLACK {
                pass = false;
                failures.push(format!(
                    "n = {} seed = {} phase {}: {measured:.3} > {DEFAULT_SLACK} x {:.3} \
                     (passes {}, pass {:.4}, uturn {:.4}, closure {:.4})",
                    r.n,
                    r.seed,
                    row.phase,
                    row.total,
                    row.num_passes,
                    row.pass_length,
                    row.uturn,
                    row.closure
                ));
            }
        }
        let allowance = table.total() + r.fallback_length;
        worst_total = worst_total.max(r.total_length / allowance);
        if r.total_length > allowance {
            pass = false;
            failures.push(format!(
                "n = {} seed = {}: total {:.3} > {:.3}",
                r.n, r.seed, r.total_length, allowance
            ));
        }
    }
    let mut detail = format!(
        "worst phase/bound ratio {:.3} (n = {}, phase {}), worst total/allowance {:.4}",
        worst.0, worst.1, worst.2, worst_total
    );
    if !failures.is_empty() {
        detail.push_str(&format!("; {}", failures.join("; ")));
    }
    outcome(pass, detail)
}

/// Point of the bead with the given local coordinates, by rejection.
fn random_local(b: &Bead, rng: &mut ChaCha8Rng) -> Point {
    loop {
        let p = Point::new(
            b.half_length * (2.0 * rng.random::<f64>() - 1.0),
            0.5 * b.width() * (2.0 * rng.random::<f64>() - 1.0),
        );
        if b.contains(b.to_world(p)) {
            return b.to_world(p);
        }
    }
}

fn bead_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(BASE_SEED ^ 5);
    let mut pass = true;
    let mut parts = Vec::new();

    let mut closed = 0.0f64;
    for k in 1..=1000 {
        let r = 0.1 + 0.005 * k as f64;
        let l = 2.0 * r * rng.random::<f64>();
        let w = bead_width(l, rho(r)).unwrap();
        let direct = 4.0 * r * (1.0 - (1.0 - l * l / (4.0 * r * r)).sqrt());
        closed = closed.max((w - direct).abs());
        closed = closed.max((bead_area(l, rho(r)).unwrap() - l * w).abs());
    }
    pass &= closed <= CLOSED_FORM_TOL;
    parts.push(format!("closed forms max error {closed:.1e}"));

    for &l in &[0.1, 0.5, 1.0] {
        let b = Bead::horizontal(Point::new(0.0, 0.0), l, rho(1.0)).unwrap();
        let box_area = 2.0 * l * b.width();
        let hits = (0..MC_SAMPLES)
            .filter(|_| {
                let x = l * (2.0 * rng.random::<f64>() - 1.0);
                let y = 0.5 * b.width() * (2.0 * rng.random::<f64>() - 1.0);
                b.contains(Point::new(x, y))
            })
            .count();
        let p = hits as f64 / MC_SAMPLES as f64;
        let est = box_area * p;
        let se = box_area * (p * (1.0 - p) / MC_SAMPLES as f64).sqrt();
        let z = (est - b.area()).abs() / se;
        pass &= z <= MC_SIGMAS;
        parts.push(format!("l = {l}: MC area z = {z:.2}"));

        let bound = traversal_bound(l, rho(1.0));
        let (mut worst_len, mut worst_margin, mut worst_hit): (f64, f64, f64) =
            (f64::MIN, 0.0, 0.0);
        for _ in 0..TRAVERSAL_TARGETS {
            let target = random_local(&b, &mut rng);
            let dir = if rng.random::<bool>() { 1 } else { -1 };
            let t = b.traversal(target, dir).unwrap();
            worst_len = worst_len.max(t.length() - bound);
            worst_hit = worst_hit.max(t.pose_at(t.target_offset).position().distance(target));
            for piece in &t.pieces {
                for s in piece.sample(l / 50.0).unwrap() {
                    worst_margin = worst_margin.min(b.margin(s.position()));
                }
            }
        }
        let ok = worst_len <= TRAVERSAL_TOL
            && worst_margin >= -TRAVERSAL_TOL
            && worst_hit <= TRAVERSAL_TOL;
        pass &= ok;
        parts.push(format!(
            "l = {l}: {TRAVERSAL_TARGETS} traversals, max excess over bound {worst_len:.1e}, \
             min margin {worst_margin:.1e}, max target miss {worst_hit:.1e}"
        ));
    }
    outcome(pass, parts.join("; "))
}

fn mirror(p: Pose) -> Pose {
    let (x, y, t) = oracle::mirror((p.x, p.y, p.theta));
    Pose::new(x, y, t)
}

fn reflect(p: Pose) -> Pose {
    let (x, y, t) = oracle::reflect((p.x, p.y, p.theta));
    Pose::new(x, y, t)
}

fn dubins_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(BASE_SEED ^ 6);
    let (mut exact_fail, mut oracle_err, mut sym_err): (usize, f64, f64) = (0, 0.0, 0.0);
    for _ in 0..POSE_PAIRS {
        let mut pose = || Pose::new(rng.random(), rng.random(), 2.0 * PI * rng.random::<f64>());
        let (a, b) = (pose(), pose());
        let r = rho(0.05 + 0.95 * rng.random::<f64>());
        let best = shortest_path(a, b, r).length();
        let min = Word::ALL
            .iter()
            .filter_map(|&w| word_length(w, a, b, r))
            .fold(f64::INFINITY, f64::min);
        if best != min {
            exact_fail += 1;
        }
        let o = oracle::shortest((a.x, a.y, a.theta), (b.x, b.y, b.theta), r.get());
        oracle_err = oracle_err.max((best - o).abs());
        let back = shortest_path(mirror(b), mirror(a), r).length();
        let refl = shortest_path(reflect(a), reflect(b), r).length();
        let s = 0.1 + 9.9 * rng.random::<f64>();
        let scaled = shortest_path(
            Pose::new(a.x * s, a.y * s, a.theta),
            Pose::new(b.x * s, b.y * s, b.theta),
            rho(r.get() * s),
        )
        .length();
        sym_err = sym_err
            .max((back - best).abs())
            .max((refl - best).abs())
            .max((scaled - s * best).abs() / (s * best).max(1.0));
    }
    let pass = exact_fail == 0 && oracle_err <= ORACLE_TOL && sym_err <= SYMMETRY_TOL;
    outcome(
        pass,
        format!(
            "{POSE_PAIRS} pairs: {exact_fail} differ from six-word minimum, max oracle gap {oracle_err:.1e}, \
             max symmetry/scale error {sym_err:.1e}"
        ),
    )
}

fn tiling_partition() -> Outcome {
    let env = Environment::unit();
    let grid = build_tiling(env, 1000, rho(SCALING_RHO)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(BASE_SEED ^ 7);
    let mut agree = 0;
    for _ in 0..LOCATE_POINTS {
        let p = Point::new(rng.random(), rng.random());
        if let Ok(id) = grid.locate(p) {
            if id == support::locate_by_scan(&grid, p) {
                agree += 1;
            }
        }
    }

    let big = build_tiling(env, POISSON_N, rho(SCALING_RHO)).unwrap();
    let pts = generate_points(POISSON_N, env, BASE_SEED ^ 8).unwrap();
    let hist = big.occupancy_histogram(pts.points()).unwrap();
    let beads: usize = hist.values().sum();
    let empty = hist.get(&0).copied().unwrap_or(0) as f64 / beads as f64;
    let expected = (-0.5f64).exp();
    let pass = agree == LOCATE_POINTS && (empty - expected).abs() <= POISSON_TOL;
    outcome(
        pass,
        format!(
            "locate agrees with scan on {agree}/{LOCATE_POINTS}; empty fraction {empty:.4} vs e^(-1/2) = {expected:.4} over {beads} beads"
        ),
    )
}

fn exact_arithmetic() -> Outcome {
    let mut fails = Vec::new();
    for i in 1..64 {
        let expect = BigRational::new(BigInt::from(1), BigInt::from(1) << (i - 1) as usize);
        if beta(i).unwrap() != expect || beta_recursion(i).unwrap() != beta(i + 1).unwrap() {
            fails.push(format!("beta({i})"));
        }
    }
    if beta(1).unwrap() != BigRational::from_integer(BigInt::from(1)) || beta(0).is_ok() {
        fails.push("beta edge cases".into());
    }
    if istar(1024).unwrap() != 4 || istar(64).unwrap() != 0 || istar(1).is_ok() {
        fails.push("istar examples".into());
    }
    for n in 2u64..20_000 {
        if istar(n).unwrap() as f64 > (n as f64).log2() {
            fails.push(format!("istar({n}) > log2 n"));
        }
    }
    let grid = build_tiling(Environment::unit(), 5000, rho(SCALING_RHO)).unwrap();
    for phase in 1..14 {
        if grid.meta_bead_count(phase) > 2 * grid.meta_bead_count(phase + 1) {
            fails.push(format!("m_{phase} > 2 m_{}", phase + 1));
        }
    }
    let r1 = rho(1.0);
    if bead_width(2.0, r1).unwrap() != 4.0 || bead_area(2.0, r1).unwrap() != 8.0 {
        fails.push("bead at l = 2 rho".into());
    }
    let pass = fails.is_empty();
    let detail = if pass {
        "beta, recursion, istar, m_i <= 2 m_(i+1) and edge examples exact".to_string()
    } else {
        fails.join(", ")
    };
    outcome(pass, detail)
}

fn tour_validity(results: &[TrialResult]) -> Outcome {
    let bad: Vec<String> = results
        .iter()
        .filter(|r| !r.validation.is_clean())
        .map(|r| format!("n = {} seed = {}: {:?}", r.n, r.seed, r.validation))
        .collect();
    let max_closure = results
        .iter()
        .map(|r| r.validation.closure_error)
        .fold(0.0, f64::max);
    let pass = bad.is_empty();
    let mut detail = format!(
        "{}/{} tours clean, max closure error {max_closure:.1e}",
        results.len() - bad.len(),
        results.len()
    );
    if !pass {
        detail.push_str(&format!("; {}", bad.join("; ")));
    }
    outcome(pass, detail)
}

fn main() -> ExitCode {
    let results = scaling_sweep();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("1 scaling exponent", scaling_exponent(&results)),
        ("2 leftover bound", leftover_bound(&results)),
        ("3 phase occupancy", phase_occupancy()),
        ("4 bound domination", bound_domination(&results)),
        ("5 bead properties", bead_suite()),
        ("6 dubins oracle", dubins_oracle()),
        ("7 tiling partition", tiling_partition()),
        ("8 exact arithmetic", exact_arithmetic()),
        ("9 tour validity", tour_validity(&results)),
    ];
    let mut failed = 0;
    for (name, o) in &criteria {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {name}: {}", o.detail);
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
