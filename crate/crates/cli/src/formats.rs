//! Plain-text file formats.
//!
//! Floats are written as `{:.16e}`, which round-trips every `f64` exactly.
//!
//! - Points: a `x,y` header, then one `x,y` row per target.
//! - Tours: `[summary]` key-value lines, then `[segments]` and `[visits]`
//!   tables, each with a header row.
//! - Sweep configs: `key = value` lines; `#` starts a comment.
//! - Sweep results: a comma-separated table with one row per trial.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use bead_tsp::experiments::{SweepConfig, TrialResult};
use bead_tsp::planner::{Visit, VisitPhase};
use bead_tsp::{
    DubinsPath, Environment, Fallback, PhaseStats, Point, Pose, Rho, TargetSet, Tour, Word,
};

use crate::error::ParseError;

type Parsed<T> = std::result::Result<T, ParseError>;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn field<T: FromStr>(line: usize, name: &str, raw: &str) -> Parsed<T> {
    raw.trim()
        .parse()
        .map_err(|_| ParseError::new(line, format!("invalid {name} `{}`", raw.trim())))
}

/// Non-empty lines with their 1-based numbers, comments removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn split_row(line: usize, row: &str, expected: usize) -> Parsed<Vec<&str>> {
    let cols: Vec<&str> = row.split(',').map(str::trim).collect();
    if cols.len() != expected {
        return Err(ParseError::new(
            line,
            format!("expected {expected} columns, found {}", cols.len()),
        ));
    }
    Ok(cols)
}

pub fn write_points(targets: &TargetSet) -> String {
    let mut s = String::from("x,y\n");
    for p in targets.points() {
        let _ = writeln!(s, "{},{}", num(p.x), num(p.y));
    }
    s
}

pub fn parse_points(text: &str) -> Parsed<TargetSet> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, "x,y")) => {}
        Some((line, other)) => {
            return Err(ParseError::new(
                line,
                format!("expected header `x,y`, found `{other}`"),
            ))
        }
        None => return Err(ParseError::new(0, "missing header `x,y`")),
    }
    let mut points = Vec::new();
    for (line, row) in lines {
        let cols = split_row(line, row, 2)?;
        points.push(Point::new(
            field(line, "x", cols[0])?,
            field(line, "y", cols[1])?,
        ));
    }
    TargetSet::new(points).map_err(|e| ParseError::new(0, e.to_string()))
}

const SEGMENT_HEADER: &str = "word,x,y,theta,rho,p1,p2,p3";
const VISIT_HEADER: &str = "target,phase,position";

fn phase_name(p: VisitPhase) -> String {
    match p {
        VisitPhase::Phase(i) => i.to_string(),
        VisitPhase::Fallback => "fallback".into(),
    }
}

pub fn write_tour(tour: &Tour, stats: &PhaseStats) -> String {
    let o = tour.origin;
    let mut s = String::from("[summary]\n");
    let _ = writeln!(s, "origin = {},{},{}", num(o.x), num(o.y), num(o.theta));
    let _ = writeln!(s, "closed = {}", tour.closed);
    let _ = writeln!(s, "total_length = {}", num(tour.length()));
    let _ = writeln!(s, "leftover = {}", stats.leftover);
    let _ = writeln!(s, "fallback_length = {}", num(stats.fallback_length));
    let _ = writeln!(s, "closure_length = {}", num(stats.closure_length));
    if let Some(l) = stats.half_length {
        let _ = writeln!(s, "half_length = {}", num(l));
    }
    for rec in &stats.phases {
        let _ = writeln!(s, "phase_{} = {}", rec.phase, num(rec.length));
    }

    let _ = write!(s, "\n[segments]\n{SEGMENT_HEADER}\n");
    for seg in &tour.segments {
        let st = seg.start;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            seg.word,
            num(st.x),
            num(st.y),
            num(st.theta),
            num(seg.rho),
            num(seg.params[0]),
            num(seg.params[1]),
            num(seg.params[2])
        );
    }

    let _ = write!(s, "\n[visits]\n{VISIT_HEADER}\n");
    for (t, v) in &tour.visits {
        let _ = writeln!(s, "{t},{},{}", phase_name(v.phase), num(v.position));
    }
    s
}

/// A tour read back from its text form.
#[derive(Debug, Clone, PartialEq)]
pub struct TourFile {
    pub tour: Tour,
    /// Every `[summary]` entry, unparsed.
    pub summary: BTreeMap<String, String>,
}

impl TourFile {
    pub fn total_length(&self) -> Option<f64> {
        self.summary.get("total_length")?.parse().ok()
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Summary,
    Segments,
    Visits,
}

pub fn parse_tour(text: &str) -> Parsed<TourFile> {
    let mut section = Section::None;
    let mut header: Option<&str> = None;
    let mut summary = BTreeMap::new();
    let mut segments = Vec::new();
    let mut visits = BTreeMap::new();
    for (line, row) in content_lines(text) {
        let next = match row {
            "[summary]" => Some(Section::Summary),
            "[segments]" => Some(Section::Segments),
            "[visits]" => Some(Section::Visits),
            _ => None,
        };
        if let Some(sec) = next {
            section = sec;
            header = match sec {
                Section::Segments => Some(SEGMENT_HEADER),
                Section::Visits => Some(VISIT_HEADER),
                _ => None,
            };
            continue;
        }
        if let Some(h) = header.take() {
            if row != h {
                return Err(ParseError::new(line, format!("expected header `{h}`")));
            }
            continue;
        }
        match section {
            Section::None => {
                return Err(ParseError::new(line, "content before the first section"));
            }
            Section::Summary => {
                let (k, v) = row
                    .split_once('=')
                    .ok_or_else(|| ParseError::new(line, "expected `key = value`"))?;
                summary.insert(k.trim().to_string(), v.trim().to_string());
            }
            Section::Segments => {
                let c = split_row(line, row, 8)?;
                let word: Word = field(line, "word", c[0])?;
                let start = Pose::new(
                    field(line, "x", c[1])?,
                    field(line, "y", c[2])?,
                    field(line, "theta", c[3])?,
                );
                let rho = Rho::new(field(line, "rho", c[4])?)
                    .map_err(|e| ParseError::new(line, e.to_string()))?;
                let params = [
                    field(line, "p1", c[5])?,
                    field(line, "p2", c[6])?,
                    field(line, "p3", c[7])?,
                ];
                segments.push(DubinsPath::new(start, rho, word, params));
            }
            Section::Visits => {
                let c = split_row(line, row, 3)?;
                let target: usize = field(line, "target", c[0])?;
                let phase = match c[1] {
                    "fallback" => VisitPhase::Fallback,
                    p => VisitPhase::Phase(field(line, "phase", p)?),
                };
                let position = field(line, "position", c[2])?;
                visits.insert(target, Visit { phase, position });
            }
        }
    }

    let origin_raw = summary
        .get("origin")
        .ok_or_else(|| ParseError::new(0, "missing summary key `origin`"))?;
    let o: Vec<&str> = origin_raw.split(',').collect();
    if o.len() != 3 {
        return Err(ParseError::new(0, "origin must be `x,y,theta`"));
    }
    let origin = Pose::new(
        field(0, "origin x", o[0])?,
        field(0, "origin y", o[1])?,
        field(0, "origin theta", o[2])?,
    );
    let closed = match summary.get("closed").map(String::as_str) {
        Some(v) => field(0, "closed", v)?,
        None => return Err(ParseError::new(0, "missing summary key `closed`")),
    };
    Ok(TourFile {
        tour: Tour {
            origin,
            segments,
            visits,
            closed,
        },
        summary,
    })
}

const CONFIG_KEYS: [&str; 7] = [
    "ns",
    "trials",
    "rho",
    "width",
    "height",
    "base_seed",
    "fallback",
];

/// Reads a sweep config. `ns`, `trials` and `rho` are required; `width`
/// and `height` default to 1, `base_seed` to 0 and `fallback` to
/// `alternating`.
pub fn parse_sweep_config(text: &str) -> Parsed<SweepConfig> {
    let mut values: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (line, row) in content_lines(text) {
        let (k, v) = row
            .split_once('=')
            .ok_or_else(|| ParseError::new(line, "expected `key = value`"))?;
        let k = k.trim();
        if !CONFIG_KEYS.contains(&k) {
            return Err(ParseError::new(line, format!("unknown key `{k}`")));
        }
        if values.insert(k, (line, v.trim())).is_some() {
            return Err(ParseError::new(line, format!("duplicate key `{k}`")));
        }
    }
    let required = |k: &str| {
        values
            .get(k)
            .copied()
            .ok_or_else(|| ParseError::new(0, format!("missing required key `{k}`")))
    };
    let optional = |k: &str, default: &'static str| values.get(k).copied().unwrap_or((0, default));

    let (line, raw) = required("ns")?;
    let ns = raw
        .split(',')
        .map(|v| field(line, "ns entry", v))
        .collect::<Parsed<Vec<usize>>>()?;
    let (line, raw) = required("trials")?;
    let trials = field(line, "trials", raw)?;
    let (line, raw) = required("rho")?;
    let rho =
        Rho::new(field(line, "rho", raw)?).map_err(|e| ParseError::new(line, e.to_string()))?;
    let (lw, w) = optional("width", "1");
    let (lh, h) = optional("height", "1");
    let env = Environment::new(field(lw, "width", w)?, field(lh, "height", h)?)
        .map_err(|e| ParseError::new(lw.max(lh), e.to_string()))?;
    let (line, raw) = optional("base_seed", "0");
    let base_seed = field(line, "base_seed", raw)?;
    let (line, raw) = optional("fallback", "alternating");
    let fallback: Fallback = raw.parse().map_err(|e: String| ParseError::new(line, e))?;

    let config = SweepConfig {
        ns,
        trials,
        env,
        rho,
        base_seed,
        fallback,
    };
    config
        .validate()
        .map_err(|e| ParseError::new(0, e.to_string()))?;
    Ok(config)
}

pub fn write_sweep_config(config: &SweepConfig) -> String {
    let ns: Vec<String> = config.ns.iter().map(usize::to_string).collect();
    format!(
        "ns = {}\ntrials = {}\nrho = {}\nwidth = {}\nheight = {}\nbase_seed = {}\nfallback = {}\n",
        ns.join(", "),
        config.trials,
        num(config.rho.get()),
        num(config.env.width),
        num(config.env.height),
        config.base_seed,
        config.fallback
    )
}

/// One row of a sweep results table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub total_length: f64,
    pub leftover: usize,
    pub fallback_length: f64,
    pub closure_length: f64,
    /// Length of each phase; `None` where the phase did not run.
    pub phases: Vec<Option<f64>>,
    /// Seconds.
    pub runtime: f64,
}

impl From<&TrialResult> for ResultRow {
    fn from(r: &TrialResult) -> Self {
        Self {
            n: r.n,
            trial: r.trial,
            seed: r.seed,
            total_length: r.total_length,
            leftover: r.leftover,
            fallback_length: r.fallback_length,
            closure_length: r.closure_length,
            phases: r.phase_lengths().into_iter().map(Some).collect(),
            runtime: r.runtime.as_secs_f64(),
        }
    }
}

const FIXED_COLUMNS: [&str; 7] = [
    "n",
    "trial",
    "seed",
    "total_length",
    "leftover",
    "fallback_length",
    "closure_length",
];

pub fn write_results(rows: &[ResultRow]) -> String {
    let width = rows.iter().map(|r| r.phases.len()).max().unwrap_or(0);
    let mut header: Vec<String> = FIXED_COLUMNS.iter().map(|c| c.to_string()).collect();
    header.extend((1..=width).map(|i| format!("phase_{i}")));
    header.push("runtime".into());
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let mut cols = vec![
            r.n.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            num(r.total_length),
            r.leftover.to_string(),
            num(r.fallback_length),
            num(r.closure_length),
        ];
        for i in 0..width {
            cols.push(
                r.phases
                    .get(i)
                    .copied()
                    .flatten()
                    .map(num)
                    .unwrap_or_default(),
            );
        }
        cols.push(num(r.runtime));
        s.push_str(&cols.join(","));
        s.push('\n');
    }
    s
}

pub fn parse_results(text: &str) -> Parsed<Vec<ResultRow>> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(0, "missing header row"))?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let width = names.len().saturating_sub(FIXED_COLUMNS.len() + 1);
    let fixed_ok =
        names.len() > FIXED_COLUMNS.len() && names[..FIXED_COLUMNS.len()] == FIXED_COLUMNS;
    let phases_ok = (1..=width).all(|i| names[FIXED_COLUMNS.len() + i - 1] == format!("phase_{i}"));
    if !fixed_ok || !phases_ok || names.last() != Some(&"runtime") {
        return Err(ParseError::new(hline, "unexpected header"));
    }
    let mut rows = Vec::new();
    for (line, row) in lines {
        let c = split_row(line, row, names.len())?;
        let phases = (0..width)
            .map(|i| {
                let raw = c[FIXED_COLUMNS.len() + i];
                if raw.is_empty() {
                    Ok(None)
                } else {
                    field(line, names[FIXED_COLUMNS.len() + i], raw).map(Some)
                }
            })
            .collect::<Parsed<Vec<Option<f64>>>>()?;
        rows.push(ResultRow {
            n: field(line, "n", c[0])?,
            trial: field(line, "trial", c[1])?,
            seed: field(line, "seed", c[2])?,
            total_length: field(line, "total_length", c[3])?,
            leftover: field(line, "leftover", c[4])?,
            fallback_length: field(line, "fallback_length", c[5])?,
            closure_length: field(line, "closure_length", c[6])?,
            phases,
            runtime: field(line, "runtime", c[c.len() - 1])?,
        });
    }
    Ok(rows)
}
