//! Seeded instances, single trials, sweeps over `n` and the statistics
//! reported from them.
//!
//! Points are drawn from ChaCha8 seeded with the instance seed: each point
//! takes two consecutive `f64` draws scaled to `[0, W) × [0, H)`. The seed of
//! trial `k` at size `n` is `base ^ splitmix64(splitmix64(n) ^ k)`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{istar, within_beta};
use crate::dubins::Rho;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::planner::{
    recursive_bead_tiling_with, validate_tour, Fallback, PhaseStats, PlannerConfig, TargetSet,
    ValidationReport, EPS_VISIT,
};
use crate::tiling::Environment;

/// The splitmix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` at size `n`.
pub fn trial_seed(base: u64, n: usize, trial: usize) -> u64 {
    base ^ splitmix64(splitmix64(n as u64) ^ trial as u64)
}

/// `n` uniform points in the environment.
pub fn generate_points(n: usize, env: Environment, seed: u64) -> Result<TargetSet> {
    if n == 0 {
        return Err(Error::EmptyTargets);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| {
            let x = env.width * rng.random::<f64>();
            let y = env.height * rng.random::<f64>();
            Point::new(x, y)
        })
        .collect();
    TargetSet::within(points, &env)
}

/// Outcome of one planned instance.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub total_length: f64,
    pub stats: PhaseStats,
    pub leftover: usize,
    pub fallback_length: f64,
    pub closure_length: f64,
    pub validation: ValidationReport,
    pub runtime: Duration,
}

impl TrialResult {
    /// Beads holding unvisited targets at the start of phase `i`; zero
    /// for phases that never ran because every target was served.
    pub fn nonempty_beads(&self, phase: u32) -> usize {
        self.stats
            .phases
            .iter()
            .find(|p| p.phase == phase)
            .map_or(0, |p| p.nonempty_beads)
    }

    pub fn phase_lengths(&self) -> Vec<f64> {
        self.stats.phases.iter().map(|p| p.length).collect()
    }
}

/// Generates, plans and validates one instance.
pub fn run_trial(
    n: usize,
    env: Environment,
    rho: Rho,
    seed: u64,
    fallback: Fallback,
) -> Result<TrialResult> {
    let started = Instant::now();
    let targets = generate_points(n, env, seed)?;
    let config = PlannerConfig {
        fallback,
        phases: None,
    };
    let (tour, stats) = recursive_bead_tiling_with(&targets, env, rho, &config)?;
    let validation = validate_tour(&tour, &targets, rho, EPS_VISIT);
    Ok(TrialResult {
        n,
        trial: 0,
        seed,
        total_length: tour.length(),
        leftover: stats.leftover,
        fallback_length: stats.fallback_length,
        closure_length: stats.closure_length,
        stats,
        validation,
        runtime: started.elapsed(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub ns: Vec<usize>,
    pub trials: usize,
    pub env: Environment,
    pub rho: Rho,
    pub base_seed: u64,
    pub fallback: Fallback,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if let Some(n) = self.ns.iter().find(|&&n| n == 0) {
            return Err(Error::InvalidConfig(format!(
                "n must be at least 1, got {n}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialFailure {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{} trial(s) failed, first at n = {}, seed = {}: {}",
    .0.len(), .0[0].n, .0[0].seed, .0[0].error)]
pub struct SweepError(pub Vec<TrialFailure>);

/// Runs every `(n, trial)` pair in parallel; results are ordered by
/// `(n, trial)` in configuration order.
pub fn sweep(config: &SweepConfig) -> std::result::Result<Vec<TrialResult>, SweepError> {
    if let Err(error) = config.validate() {
        return Err(SweepError(vec![TrialFailure {
            n: 0,
            trial: 0,
            seed: config.base_seed,
            error,
        }]));
    }
    let jobs: Vec<(usize, usize, usize)> = config
        .ns
        .iter()
        .enumerate()
        .flat_map(|(k, &n)| (0..config.trials).map(move |t| (k, n, t)))
        .collect();
    let mut outcomes: Vec<(
        (usize, usize),
        std::result::Result<TrialResult, TrialFailure>,
    )> = jobs
        .par_iter()
        .map(|&(k, n, trial)| {
            let seed = trial_seed(config.base_seed, n, trial);
            let out = run_trial(n, config.env, config.rho, seed, config.fallback)
                .map(|mut r| {
                    r.trial = trial;
                    r
                })
                .map_err(|error| TrialFailure {
                    n,
                    trial,
                    seed,
                    error,
                });
            ((k, trial), out)
        })
        .collect();
    outcomes.sort_by_key(|(key, _)| *key);
    let (ok, failed): (Vec<_>, Vec<_>) = outcomes
        .into_iter()
        .map(|(_, o)| o)
        .partition(|o| o.is_ok());
    if failed.is_empty() {
        Ok(ok.into_iter().map(|o| o.expect("partitioned")).collect())
    } else {
        Err(SweepError(
            failed
                .into_iter()
                .map(|o| o.expect_err("partitioned"))
                .collect(),
        ))
    }
}

/// Least-squares line through `(ln n, ln L̄(n))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

/// Mean length per distinct `n`, in increasing `n`.
pub fn mean_by_n<I: IntoIterator<Item = (usize, f64)>>(samples: I) -> BTreeMap<usize, f64> {
    let mut acc: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for (n, len) in samples {
        let e = acc.entry(n).or_insert((0.0, 0));
        e.0 += len;
        e.1 += 1;
    }
    acc.into_iter()
        .map(|(n, (s, c))| (n, s / c as f64))
        .collect()
}

/// Fits `ln L̄ = slope · ln n + intercept` over per-`n` means.
pub fn fit_samples<I: IntoIterator<Item = (usize, f64)>>(samples: I) -> Result<ExponentFit> {
    let means = mean_by_n(samples);
    if means.len() < 2 {
        return Err(Error::TooFewSizes(means.len()));
    }
    let pts: Vec<(f64, f64)> = means
        .iter()
        .map(|(&n, &m)| ((n as f64).ln(), m.ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum();
    Ok(ExponentFit {
        slope,
        intercept,
        residual: (sse / k).sqrt(),
    })
}

pub fn fit_exponent(results: &[TrialResult]) -> Result<ExponentFit> {
    fit_samples(results.iter().map(|r| (r.n, r.total_length)))
}

/// Leftover statistics at one `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeftoverPoint {
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub max: usize,
    /// `24 log₂ n`.
    pub limit: f64,
    /// Trials with `leftover ≤ limit`.
    pub within_limit: usize,
}

pub fn leftover_curve(results: &[TrialResult]) -> Vec<LeftoverPoint> {
    let mut by_n: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for r in results {
        by_n.entry(r.n).or_default().push(r.leftover);
    }
    by_n.into_iter()
        .map(|(n, v)| {
            let limit = 24.0 * (n as f64).log2();
            LeftoverPoint {
                n,
                trials: v.len(),
                mean: v.iter().sum::<usize>() as f64 / v.len() as f64,
                max: v.iter().copied().max().unwrap_or(0),
                limit,
                within_limit: v.iter().filter(|&&x| x as f64 <= limit).count(),
            }
        })
        .collect()
}

/// Measured `v_i` against `β_i n` at one phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupancyRow {
    pub phase: u32,
    pub beta_n: f64,
    pub mean_v: f64,
    pub max_v: usize,
    /// Trials with `v_i ≤ β_i n`.
    pub within: usize,
}

/// Occupancy comparison for phases `1..=i*(n)` at one `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyReport {
    pub n: usize,
    pub istar: i64,
    pub trials: usize,
    pub rows: Vec<OccupancyRow>,
    /// Trials in which every tracked phase satisfies the bound.
    pub all_within: usize,
}

pub fn phase_occupancy_report(results: &[TrialResult]) -> Result<Vec<OccupancyReport>> {
    let mut by_n: BTreeMap<usize, Vec<&TrialResult>> = BTreeMap::new();
    for r in results {
        by_n.entry(r.n).or_default().push(r);
    }
    let mut out = Vec::new();
    for (n, trials) in by_n {
        let star = if n >= 2 { istar(n as u64)? } else { 0 };
        let mut rows = Vec::new();
        let mut all = vec![true; trials.len()];
        for i in 1..=star.max(0) {
            let phase = i as u32;
            let vs: Vec<usize> = trials.iter().map(|r| r.nonempty_beads(phase)).collect();
            let mut within = 0;
            for (k, &v) in vs.iter().enumerate() {
                if within_beta(i, n, v)? {
                    within += 1;
                } else {
                    all[k] = false;
                }
            }
            rows.push(OccupancyRow {
                phase,
                beta_n: crate::bounds::beta_times(i, n)?,
                mean_v: vs.iter().sum::<usize>() as f64 / vs.len() as f64,
                max_v: vs.iter().copied().max().unwrap_or(0),
                within,
            });
        }
        out.push(OccupancyReport {
            n,
            istar: star,
            trials: trials.len(),
            rows,
            all_within: all.iter().filter(|&&b| b).count(),
        });
    }
    Ok(out)
}
