//! Command definitions and handlers.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use bead_tsp::bounds::{odd_phase_bounds, BoundTable};
use bead_tsp::experiments::{fit_samples, generate_points, sweep};
use bead_tsp::planner::EPS_VISIT;
use bead_tsp::{
    build_tiling, recursive_bead_tiling_with, validate_tour, Environment, Fallback, PlannerConfig,
    Rho, TargetSet,
};
use clap::{Args, Parser, Subcommand};

use crate::error::{CliError, ParseError, Result};
use crate::formats::{
    parse_points, parse_results, parse_sweep_config, parse_tour, write_points, write_results,
    write_tour, ResultRow,
};
use crate::svg::render_svg;

/// Default slope window for `fit`.
pub const SLOPE_WINDOW: (f64, f64) = (0.55, 0.80);

#[derive(Debug, Parser)]
#[command(
    name = "bead-tsp",
    version,
    about = "Bounded-curvature tours by recursive bead tiling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write uniformly random targets.
    Gen(GenArgs),
    /// Plan a tour through a point file.
    Tour(TourArgs),
    /// Run a sweep described by a config file.
    Sweep(SweepArgs),
    /// Fit the length exponent of a sweep results table.
    Fit(FitArgs),
    /// Print the per-phase length bounds of an instance.
    Bounds(BoundsArgs),
    /// Render a tour file as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct EnvArgs {
    /// Environment width.
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    /// Environment height.
    #[arg(long, default_value_t = 1.0)]
    pub height: f64,
}

impl EnvArgs {
    fn env(&self) -> Result<Environment> {
        Environment::new(self.width, self.height).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Number of targets.
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub env: EnvArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TourArgs {
    /// Point file written by `gen`.
    #[arg(long)]
    pub points: PathBuf,
    #[command(flatten)]
    pub env: EnvArgs,
    /// Minimum turning radius.
    #[arg(long)]
    pub rho: f64,
    #[arg(long, default_value = "alternating")]
    pub fallback: Fallback,
    /// Number of phases; defaults to floor(log2 n) + 1.
    #[arg(long)]
    pub phases: Option<u32>,
    /// Tour file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also render the tour to this SVG file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Config file of `key = value` lines.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config's base seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Results table; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Results table written by `sweep`.
    pub results: PathBuf,
    #[arg(long, default_value_t = SLOPE_WINDOW.0)]
    pub min_slope: f64,
    #[arg(long, default_value_t = SLOPE_WINDOW.1)]
    pub max_slope: f64,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Number of targets.
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub env: EnvArgs,
    #[arg(long)]
    pub rho: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub points: PathBuf,
    /// Tour file; only targets are drawn when absent.
    #[arg(long)]
    pub tour: Option<PathBuf>,
    #[command(flatten)]
    pub env: EnvArgs,
    /// Turning radius, needed for bead outlines.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Draw the bead tiling for the point count.
    #[arg(long)]
    pub beads: bool,
    /// SVG file; stdout when absent.
    #[arg(long, alias = "svg")]
    pub out: Option<PathBuf>,
}

fn rho(v: f64) -> Result<Rho> {
    Rho::new(v).map_err(|e| CliError::Usage(e.to_string()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parsed<T>(path: &Path, r: std::result::Result<T, ParseError>) -> Result<T> {
    r.map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn read_points(path: &Path, env: &Environment) -> Result<TargetSet> {
    let targets = parsed(path, parse_points(&read(path)?))?;
    if let Some(p) = targets.points().iter().find(|p| !env.contains(**p)) {
        return Err(bead_tsp::Error::PointOutsideEnvironment { x: p.x, y: p.y }.into());
    }
    Ok(targets)
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Gen(a) => cmd_gen(&a, stdout),
        Command::Tour(a) => cmd_tour(&a, stdout),
        Command::Sweep(a) => cmd_sweep(&a, stdout),
        Command::Fit(a) => cmd_fit(&a, stdout),
        Command::Bounds(a) => cmd_bounds(&a, stdout),
        Command::Render(a) => cmd_render(&a, stdout),
    }
}

pub fn cmd_gen(a: &GenArgs, stdout: &mut dyn Write) -> Result<()> {
    let targets = generate_points(a.n, a.env.env()?, a.seed).map_err(|e| match e {
        bead_tsp::Error::EmptyTargets => CliError::Usage("--n must be at least 1".into()),
        e => e.into(),
    })?;
    emit(a.out.as_deref(), &write_points(&targets), stdout)
}

pub fn cmd_tour(a: &TourArgs, stdout: &mut dyn Write) -> Result<()> {
    let env = a.env.env()?;
    let r = rho(a.rho)?;
    let targets = read_points(&a.points, &env)?;
    let config = PlannerConfig {
        fallback: a.fallback,
        phases: a.phases,
    };
    let (tour, stats) = recursive_bead_tiling_with(&targets, env, r, &config)?;
    let report = validate_tour(&tour, &targets, r, EPS_VISIT);
    if !report.is_clean() {
        return Err(CliError::Invalid(format!("{report:?}")));
    }
    if let Some(svg) = &a.svg {
        emit(
            Some(svg),
            &render_svg(&env, Some(&tour), &targets, None),
            stdout,
        )?;
    }
    emit(a.out.as_deref(), &write_tour(&tour, &stats), stdout)
}

pub fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write) -> Result<()> {
    let mut config = parsed(&a.config, parse_sweep_config(&read(&a.config)?))?;
    if let Some(seed) = a.seed {
        config.base_seed = seed;
    }
    let results = sweep(&config)?;
    let rows: Vec<ResultRow> = results.iter().map(ResultRow::from).collect();
    emit(a.out.as_deref(), &write_results(&rows), stdout)
}

pub fn cmd_fit(a: &FitArgs, stdout: &mut dyn Write) -> Result<()> {
    let rows = parsed(&a.results, parse_results(&read(&a.results)?))?;
    let fit = fit_samples(rows.iter().map(|r| (r.n, r.total_length)))?;
    let pass = fit.slope >= a.min_slope && fit.slope <= a.max_slope;
    let text = format!(
        "slope = {:.6}\nintercept = {:.6}\nresidual = {:.6}\nwindow = [{}, {}]\n{}\n",
        fit.slope,
        fit.intercept,
        fit.residual,
        a.min_slope,
        a.max_slope,
        if pass { "PASS" } else { "FAIL" }
    );
    emit(None, &text, stdout)
}

pub fn format_bounds(n: usize, table: &BoundTable) -> String {
    let mut s = format!("n = {n}\nl = {:.12e}\nc1 = {:.12e}\n", table.l, table.c1);
    s.push_str("j,phase,beads_per_pass,pass_length,uturn,num_passes,num_passes_relaxed,closure,phase_length\n");
    for r in &table.rows {
        let _ = writeln!(
            s,
            "{},{},{},{:.12e},{:.12e},{},{:.12e},{:.12e},{:.12e}",
            r.j,
            r.phase,
            r.beads_per_pass,
            r.pass_length,
            r.uturn,
            r.num_passes,
            r.num_passes_relaxed,
            r.closure,
            r.total
        );
    }
    let _ = writeln!(
        s,
        "odd_sum = {:.12e}\ntotal = {:.12e}",
        table.odd_sum(),
        table.total()
    );
    s
}

pub fn cmd_bounds(a: &BoundsArgs, stdout: &mut dyn Write) -> Result<()> {
    let table = odd_phase_bounds(a.env.env()?, rho(a.rho)?, a.n)?;
    emit(a.out.as_deref(), &format_bounds(a.n, &table), stdout)
}

pub fn cmd_render(a: &RenderArgs, stdout: &mut dyn Write) -> Result<()> {
    let env = a.env.env()?;
    let targets = read_points(&a.points, &env)?;
    let tour = match &a.tour {
        Some(path) => Some(parsed(path, parse_tour(&read(path)?))?.tour),
        None => None,
    };
    let grid = if a.beads {
        let r = a
            .rho
            .ok_or_else(|| CliError::Usage("--beads needs --rho".into()))?;
        Some(build_tiling(env, targets.len(), rho(r)?)?)
    } else {
        None
    };
    let svg = render_svg(&env, tour.as_ref(), &targets, grid.as_ref());
    emit(a.out.as_deref(), &svg, stdout)
}
