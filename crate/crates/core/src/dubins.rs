//! Minimum-length bounded-curvature paths between two poses.
//!
//! Every shortest path for a forward-only vehicle with turn radius `rho` is
//! one of six words built from left arcs (`L`), right arcs (`R`) and straight
//! segments (`S`): `LSL`, `RSR`, `RSL`, `LSR`, `RLR`, `LRL`. Each word has a
//! closed-form solution in coordinates normalized by `rho`; the shortest path
//! is the minimum over the feasible words.
//!
//! Segment parameters follow one convention throughout the crate: arc
//! parameters are swept angles in radians, straight parameters are lengths.
//!
//! Angles are kept in `[0, 2π)`. Swept angles that come out within
//! [`FULL_TURN_SNAP`] of a full turn are folded to zero; a full loop returns
//! the vehicle to the same pose, so the endpoint is unchanged.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geom::{angle_gap, normalize_angle, Point};

/// Arc sweeps closer than this to `2π` are treated as zero.
pub const FULL_TURN_SNAP: f64 = 1e-10;

/// Tolerance for endpoint reconstruction checks, in length and radians.
pub const ENDPOINT_TOL: f64 = 1e-9;

/// Minimum turn radius of the vehicle.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Rho(f64);

impl Rho {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidRho(value))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// Planar position plus heading.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    /// Heading in radians, in `[0, 2π)`.
    pub theta: f64,
}

impl Pose {
    /// Builds a pose, normalizing the heading into `[0, 2π)`.
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: normalize_angle(theta),
        }
    }

    pub fn checked(x: f64, y: f64, theta: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && theta.is_finite() {
            Ok(Self::new(x, y, theta))
        } else {
            Err(Error::NonFinitePose)
        }
    }

    pub fn at(p: Point, theta: f64) -> Self {
        Self::new(p.x, p.y, theta)
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn distance(&self, other: &Pose) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }

    /// Larger of the positional distance and the heading gap.
    pub fn mismatch(&self, other: &Pose) -> f64 {
        self.distance(other).max(angle_gap(self.theta, other.theta))
    }

    /// Pose after driving one primitive segment.
    pub fn advance(&self, steer: Steer, param: f64, rho: f64) -> Pose {
        let (x, y, th) = (self.x, self.y, self.theta);
        match steer {
            Steer::Straight => Pose::new(x + param * th.cos(), y + param * th.sin(), th),
            Steer::Left => Pose::new(
                x + rho * ((th + param).sin() - th.sin()),
                y + rho * (th.cos() - (th + param).cos()),
                th + param,
            ),
            Steer::Right => Pose::new(
                x + rho * (th.sin() - (th - param).sin()),
                y + rho * ((th - param).cos() - th.cos()),
                th - param,
            ),
        }
    }
}

/// One primitive motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Steer {
    Left,
    Straight,
    Right,
}

impl Steer {
    pub fn is_arc(self) -> bool {
        !matches!(self, Steer::Straight)
    }

    pub fn flipped(self) -> Steer {
        match self {
            Steer::Left => Steer::Right,
            Steer::Right => Steer::Left,
            Steer::Straight => Steer::Straight,
        }
    }
}

/// A primitive segment: arc sweep in radians or straight length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub steer: Steer,
    pub param: f64,
}

impl Segment {
    pub const fn new(steer: Steer, param: f64) -> Self {
        Self { steer, param }
    }

    pub fn length(&self, rho: f64) -> f64 {
        if self.steer.is_arc() {
            self.param * rho
        } else {
            self.param
        }
    }
}

/// The six Dubins words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Word {
    Lsl,
    Rsr,
    Rsl,
    Lsr,
    Rlr,
    Lrl,
}

impl Word {
    pub const ALL: [Word; 6] = [
        Word::Lsl,
        Word::Rsr,
        Word::Rsl,
        Word::Lsr,
        Word::Rlr,
        Word::Lrl,
    ];

    pub fn steers(self) -> [Steer; 3] {
        use Steer::*;
        match self {
            Word::Lsl => [Left, Straight, Left],
            Word::Rsr => [Right, Straight, Right],
            Word::Rsl => [Right, Straight, Left],
            Word::Lsr => [Left, Straight, Right],
            Word::Rlr => [Right, Left, Right],
            Word::Lrl => [Left, Right, Left],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Word::Lsl => "LSL",
            Word::Rsr => "RSR",
            Word::Rsl => "RSL",
            Word::Lsr => "LSR",
            Word::Rlr => "RLR",
            Word::Lrl => "LRL",
        }
    }

    fn from_steers(steers: [Steer; 3]) -> Option<Word> {
        Word::ALL.into_iter().find(|w| w.steers() == steers)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Word {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Word::ALL
            .into_iter()
            .find(|w| w.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown Dubins word `{s}`"))
    }
}

/// A three-segment bounded-curvature path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DubinsPath {
    pub start: Pose,
    pub rho: f64,
    pub word: Word,
    /// Arc sweeps in radians, straight lengths in length units.
    pub params: [f64; 3],
}

impl DubinsPath {
    pub fn new(start: Pose, rho: Rho, word: Word, params: [f64; 3]) -> Self {
        Self {
            start,
            rho: rho.get(),
            word,
            params,
        }
    }

    /// A straight path of the given length along the start heading.
    pub fn straight(start: Pose, length: f64, rho: Rho) -> Self {
        Self::new(start, rho, Word::Lsl, [0.0, length, 0.0])
    }

    pub fn segments(&self) -> [Segment; 3] {
        let s = self.word.steers();
        [
            Segment::new(s[0], self.params[0]),
            Segment::new(s[1], self.params[1]),
            Segment::new(s[2], self.params[2]),
        ]
    }

    pub fn segment_length(&self, i: usize) -> f64 {
        self.segments()[i].length(self.rho)
    }

    pub fn length(&self) -> f64 {
        self.segments().iter().map(|s| s.length(self.rho)).sum()
    }

    /// True when the path never turns.
    pub fn is_straight(&self) -> bool {
        self.segments()
            .iter()
            .all(|s| !s.steer.is_arc() || s.param == 0.0)
    }

    /// Pose at arc length `s`, clamped to `[0, length]`.
    pub fn pose_at(&self, s: f64) -> Pose {
        let mut pose = self.start;
        let mut remaining = s.max(0.0);
        for seg in self.segments() {
            let len = seg.length(self.rho);
            if remaining <= len {
                let param = if seg.steer.is_arc() {
                    remaining / self.rho
                } else {
                    remaining
                };
                return pose.advance(seg.steer, param, self.rho);
            }
            pose = pose.advance(seg.steer, seg.param, self.rho);
            remaining -= len;
        }
        pose
    }

    /// Endpoint obtained by integrating all three segments.
    pub fn end(&self) -> Pose {
        self.segments().iter().fold(self.start, |p, seg| {
            p.advance(seg.steer, seg.param, self.rho)
        })
    }

    pub fn sample(&self, spacing: f64) -> Result<Vec<Pose>> {
        sample_path(self, spacing)
    }
}

/// Sum of arc sweeps times `rho` plus the straight length.
pub fn path_length(path: &DubinsPath) -> f64 {
    path.length()
}

/// Evenly spaced poses along `path` with gaps no larger than `spacing`,
/// including both endpoints.
pub fn sample_path(path: &DubinsPath, spacing: f64) -> Result<Vec<Pose>> {
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::InvalidSpacing(spacing));
    }
    let total = path.length();
    let steps = ((total / spacing) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let step = total / steps as f64;
    let mut out: Vec<Pose> = (0..steps).map(|i| path.pose_at(i as f64 * step)).collect();
    out.push(path.end());
    Ok(out)
}

/// Closed-form inputs shared by all six words.
struct Normalized {
    alpha: f64,
    beta: f64,
    d: f64,
    sa: f64,
    sb: f64,
    ca: f64,
    cb: f64,
    c_ab: f64,
}

impl Normalized {
    fn new(start: &Pose, end: &Pose, rho: f64) -> Self {
        let dx = end.x - start.x;
        let dy = end.y - start.y;
        let dist = dx.hypot(dy);
        let d = dist / rho;
        let theta = if dist > 0.0 {
            normalize_angle(dy.atan2(dx))
        } else {
            0.0
        };
        let alpha = normalize_angle(start.theta - theta);
        let beta = normalize_angle(end.theta - theta);
        Self {
            alpha,
            beta,
            d,
            sa: alpha.sin(),
            sb: beta.sin(),
            ca: alpha.cos(),
            cb: beta.cos(),
            c_ab: (alpha - beta).cos(),
        }
    }
}

fn snap(a: f64) -> f64 {
    let a = normalize_angle(a);
    if a > TAU - FULL_TURN_SNAP {
        0.0
    } else {
        a
    }
}

/// Tolerance on squared normalized lengths before a word is declared
/// infeasible; absorbs rounding at exact tangency.
const FEASIBILITY_SLACK: f64 = 1e-12;

fn sqrt_nonneg(v: f64) -> Option<f64> {
    if v < -FEASIBILITY_SLACK {
        None
    } else {
        Some(v.max(0.0).sqrt())
    }
}

/// Normalized `(t, p, q)` for a word, `p` being a normalized length for the
/// `CSC` words and an angle for `CCC`.
fn solve_normalized(word: Word, n: &Normalized) -> Option<[f64; 3]> {
    let Normalized {
        alpha,
        beta,
        d,
        sa,
        sb,
        ca,
        cb,
        c_ab,
    } = *n;
    match word {
        Word::Lsl => {
            let p = sqrt_nonneg(2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sa - sb))?;
            let tmp = (cb - ca).atan2(d + sa - sb);
            Some([snap(tmp - alpha), p, snap(beta - tmp)])
        }
        Word::Rsr => {
            let p = sqrt_nonneg(2.0 + d * d - 2.0 * c_ab + 2.0 * d * (sb - sa))?;
            let tmp = (ca - cb).atan2(d - sa + sb);
            Some([snap(alpha - tmp), p, snap(tmp - beta)])
        }
        Word::Lsr => {
            let p = sqrt_nonneg(-2.0 + d * d + 2.0 * c_ab + 2.0 * d * (sa + sb))?;
            let tmp = (-ca - cb).atan2(d + sa + sb) - (-2.0f64).atan2(p);
            Some([snap(tmp - alpha), p, snap(tmp - beta)])
        }
        Word::Rsl => {
            let p = sqrt_nonneg(-2.0 + d * d + 2.0 * c_ab - 2.0 * d * (sa + sb))?;
            let tmp = (ca + cb).atan2(d - sa - sb) - 2.0f64.atan2(p);
            Some([snap(alpha - tmp), p, snap(beta - tmp)])
        }
        Word::Rlr => {
            let c = (6.0 - d * d + 2.0 * c_ab + 2.0 * d * (sa - sb)) / 8.0;
            if c.abs() > 1.0 + FEASIBILITY_SLACK {
                return None;
            }
            let phi = (ca - cb).atan2(d - sa + sb);
            let p = snap(TAU - c.clamp(-1.0, 1.0).acos());
            let t = snap(alpha - phi + p / 2.0);
            let q = snap(alpha - beta - t + p);
            Some([t, p, q])
        }
        Word::Lrl => {
            let c = (6.0 - d * d + 2.0 * c_ab + 2.0 * d * (sb - sa)) / 8.0;
            if c.abs() > 1.0 + FEASIBILITY_SLACK {
                return None;
            }
            let phi = (ca - cb).atan2(d + sa - sb);
            let p = snap(TAU - c.clamp(-1.0, 1.0).acos());
            let t = snap(-alpha - phi + p / 2.0);
            let q = snap(beta - alpha - t + p);
            Some([t, p, q])
        }
    }
}

/// The path realizing `word` between two poses, if the word is feasible.
pub fn solve_word(word: Word, start: Pose, end: Pose, rho: Rho) -> Option<DubinsPath> {
    let r = rho.get();
    let n = Normalized::new(&start, &end, r);
    let [t, p, q] = solve_normalized(word, &n)?;
    let middle = if word.steers()[1].is_arc() { p } else { p * r };
    Some(DubinsPath::new(start, rho, word, [t, middle, q]))
}

/// Closed-form length of `word` between two poses; `None` when infeasible.
pub fn word_length(word: Word, start: Pose, end: Pose, rho: Rho) -> Option<f64> {
    solve_word(word, start, end, rho).map(|p| p.length())
}

/// Minimum-length path over all six words. Ties keep the earlier word in
/// [`Word::ALL`].
pub fn shortest_path(start: Pose, end: Pose, rho: Rho) -> DubinsPath {
    Word::ALL
        .into_iter()
        .filter_map(|w| solve_word(w, start, end, rho))
        .fold(None, |best: Option<DubinsPath>, cand| match best {
            Some(b) if b.length() <= cand.length() => Some(b),
            _ => Some(cand),
        })
        .expect("CSC words always admit a solution")
}

/// Packs a run of primitive segments into as few Dubins words as possible.
///
/// Adjacent primitives of the same kind are merged and zero-length ones
/// dropped first. The start pose of each emitted path is the integrated
/// endpoint of the previous one.
pub fn pack_segments(start: Pose, rho: Rho, segments: &[Segment]) -> Vec<DubinsPath> {
    let mut merged: Vec<Segment> = Vec::with_capacity(segments.len());
    for seg in segments.iter().filter(|s| s.param > 0.0) {
        match merged.last_mut() {
            Some(last) if last.steer == seg.steer => last.param += seg.param,
            _ => merged.push(*seg),
        }
    }

    let mut out = Vec::new();
    let mut pose = start;
    let mut i = 0;
    while i < merged.len() {
        let rest = &merged[i..];
        let (path, used) = if rest.len() >= 3 {
            match Word::from_steers([rest[0].steer, rest[1].steer, rest[2].steer]) {
                Some(w) => (
                    DubinsPath::new(pose, rho, w, [rest[0].param, rest[1].param, rest[2].param]),
                    3,
                ),
                None => pack_pair(pose, rho, rest),
            }
        } else {
            pack_pair(pose, rho, rest)
        };
        pose = path.end();
        out.push(path);
        i += used;
    }
    out
}

fn pack_pair(pose: Pose, rho: Rho, rest: &[Segment]) -> (DubinsPath, usize) {
    use Steer::*;
    let a = rest[0];
    let Some(b) = rest.get(1).copied() else {
        return (single(pose, rho, a), 1);
    };
    let packed = match (a.steer, b.steer) {
        (Left, Straight) => Some((Word::Lsl, [a.param, b.param, 0.0])),
        (Right, Straight) => Some((Word::Rsr, [a.param, b.param, 0.0])),
        (Straight, Left) => Some((Word::Lsl, [0.0, a.param, b.param])),
        (Straight, Right) => Some((Word::Rsr, [0.0, a.param, b.param])),
        (Left, Right) => Some((Word::Lrl, [a.param, b.param, 0.0])),
        (Right, Left) => Some((Word::Rlr, [a.param, b.param, 0.0])),
        _ => None,
    };
    match packed {
        Some((w, params)) => (DubinsPath::new(pose, rho, w, params), 2),
        None => (single(pose, rho, a), 1),
    }
}

fn single(pose: Pose, rho: Rho, seg: Segment) -> DubinsPath {
    let (word, params) = match seg.steer {
        Steer::Left => (Word::Lsl, [seg.param, 0.0, 0.0]),
        Steer::Right => (Word::Rsr, [seg.param, 0.0, 0.0]),
        Steer::Straight => (Word::Lsl, [0.0, seg.param, 0.0]),
    };
    DubinsPath::new(pose, rho, word, params)
}

/// Pose reached by driving a sequence of primitives.
pub fn integrate(start: Pose, rho: f64, segments: &[Segment]) -> Pose {
    segments
        .iter()
        .fold(start, |p, s| p.advance(s.steer, s.param, rho))
}

/// Heading for a right-handed pass sign: `0` forward, `π` backward.
pub(crate) fn heading_for(forward: bool) -> f64 {
    if forward {
        0.0
    } else {
        PI
    }
}
