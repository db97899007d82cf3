//! SVG rendering of tours, targets and bead outlines.
//!
//! Drawing happens in world coordinates inside a group that flips the y
//! axis, so left turns use sweep flag 1. Arcs are split into pieces of at
//! most a quarter turn, each drawn with radius exactly `ρ`.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use bead_tsp::planner::VisitPhase;
use bead_tsp::{BeadGrid, DubinsPath, Environment, Steer, TargetSet, Tour};

const PHASE_COLORS: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
const FALLBACK_COLOR: &str = "#7f7f7f";
const UNVISITED_COLOR: &str = "#000000";

struct Fmt {
    digits: usize,
}

impl Fmt {
    fn for_env(env: &Environment) -> Self {
        let scale = env.width.max(env.height);
        let digits = (6.0 - scale.log10().floor()).clamp(3.0, 15.0) as usize;
        Self { digits }
    }

    fn n(&self, x: f64) -> String {
        let s = format!("{:.*}", self.digits, x);
        if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
            s[1..].to_string()
        } else {
            s
        }
    }
}

/// Path data for one Dubins path.
fn path_data(path: &DubinsPath, f: &Fmt) -> String {
    let mut d = format!("M{} {}", f.n(path.start.x), f.n(path.start.y));
    let mut pose = path.start;
    for seg in path.segments() {
        if seg.param == 0.0 {
            continue;
        }
        match seg.steer {
            Steer::Straight => {
                pose = pose.advance(seg.steer, seg.param, path.rho);
                let _ = write!(d, " L{} {}", f.n(pose.x), f.n(pose.y));
            }
            Steer::Left | Steer::Right => {
                let pieces = (seg.param / FRAC_PI_2).ceil().max(1.0) as usize;
                let step = seg.param / pieces as f64;
                let sweep = u8::from(seg.steer == Steer::Left);
                let r = f.n(path.rho);
                for _ in 0..pieces {
                    pose = pose.advance(seg.steer, step, path.rho);
                    let _ = write!(d, " A{r} {r} 0 0 {sweep} {} {}", f.n(pose.x), f.n(pose.y));
                }
            }
        }
    }
    d
}

fn color(phase: Option<VisitPhase>) -> &'static str {
    match phase {
        Some(VisitPhase::Phase(i)) => {
            PHASE_COLORS[(i as usize).saturating_sub(1) % PHASE_COLORS.len()]
        }
        Some(VisitPhase::Fallback) => FALLBACK_COLOR,
        None => UNVISITED_COLOR,
    }
}

/// Renders the environment, optional bead outlines, the tour and the
/// targets colored by the phase that served them.
pub fn render_svg(
    env: &Environment,
    tour: Option<&Tour>,
    targets: &TargetSet,
    grid: Option<&BeadGrid>,
) -> String {
    let f = Fmt::for_env(env);
    let scale = env.width.max(env.height);
    let margin = 0.02 * scale;
    let stroke = 0.002 * scale;
    let dot = 0.004 * scale;
    let px = 800.0 / (env.width + 2.0 * margin).max(env.height + 2.0 * margin);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{:.0}" height="{:.0}">"#,
        f.n(-margin),
        f.n(-margin),
        f.n(env.width + 2.0 * margin),
        f.n(env.height + 2.0 * margin),
        px * (env.width + 2.0 * margin),
        px * (env.height + 2.0 * margin),
    );
    let _ = writeln!(
        s,
        r#"<g transform="matrix(1 0 0 -1 0 {})">"#,
        f.n(env.height)
    );
    let _ = writeln!(
        s,
        r##"<rect x="0" y="0" width="{}" height="{}" fill="none" stroke="#444444" stroke-width="{}"/>"##,
        f.n(env.width),
        f.n(env.height),
        f.n(stroke)
    );
    if let Some(grid) = grid {
        for id in grid.ids() {
            for outline in grid.bead(id).outline() {
                let _ = writeln!(
                    s,
                    r##"<path class="bead" d="{}" fill="none" stroke="#cccccc" stroke-width="{}"/>"##,
                    path_data(&outline, &f),
                    f.n(0.5 * stroke)
                );
            }
        }
    }
    if let Some(tour) = tour {
        for seg in &tour.segments {
            let _ = writeln!(
                s,
                r##"<path class="segment" d="{}" fill="none" stroke="#222222" stroke-width="{}"/>"##,
                path_data(seg, &f),
                f.n(stroke)
            );
        }
    }
    for (i, p) in targets.points().iter().enumerate() {
        let phase = tour.and_then(|t| t.visits.get(&i)).map(|v| v.phase);
        let _ = writeln!(
            s,
            r#"<circle class="target" cx="{}" cy="{}" r="{}" fill="{}"/>"#,
            f.n(p.x),
            f.n(p.y),
            f.n(dot),
            color(phase)
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}
