//! Independent reference computations for integration tests.
//!
//! Nothing here calls the closed-form solver. Word lengths are found by
//! scanning the first-arc angle and root-finding a tangency residual.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI, TAU};

pub type P = (f64, f64, f64);

const GRID: usize = 4000;

fn wrap(a: f64) -> f64 {
    let t = a.rem_euclid(TAU);
    if t >= TAU - 1e-12 {
        0.0
    } else {
        t
    }
}

fn turn_sign(c: char) -> f64 {
    match c {
        'L' => 1.0,
        'R' => -1.0,
        _ => unreachable!(),
    }
}

/// Centre of the turning circle on side `c` of pose `p`.
fn circle(p: P, c: char, rho: f64) -> (f64, f64) {
    let s = turn_sign(c);
    (p.0 - s * rho * p.2.sin(), p.1 + s * rho * p.2.cos())
}

/// Pose after turning by `t` on side `c`.
fn arc(p: P, c: char, t: f64, rho: f64) -> P {
    let (cx, cy) = circle(p, c, rho);
    let s = turn_sign(c);
    let h = p.2 + s * t;
    (cx + s * rho * h.sin(), cy - s * rho * h.cos(), h)
}

/// Simple root search of `f` over `[0, 2π)`: sign changes refined by
/// bisection, near-zero local minima of `|f|` refined by ternary search.
fn roots(f: &dyn Fn(f64) -> f64) -> Vec<f64> {
    let ts: Vec<f64> = (0..=GRID).map(|k| k as f64 * TAU / GRID as f64).collect();
    let vs: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let mut out = Vec::new();
    for k in 0..GRID {
        let (a, b) = (ts[k], ts[k + 1]);
        let (fa, fb) = (vs[k], vs[k + 1]);
        if fa == 0.0 {
            out.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
    }
    // touching roots
    for k in 1..GRID {
        let (fp, fc, fnx) = (vs[k - 1].abs(), vs[k].abs(), vs[k + 1].abs());
        if fc <= fp && fc <= fnx && fc < 1e-3 {
            let (mut lo, mut hi) = (ts[k - 1], ts[k + 1]);
            for _ in 0..200 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                if f(m1).abs() < f(m2).abs() {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            let t = 0.5 * (lo + hi);
            if f(t).abs() < 1e-10 {
                out.push(t);
            }
        }
    }
    out.into_iter().map(wrap).collect()
}

/// Lengths of every realization of `word` (e.g. "LSR").
pub fn realizations(word: &str, a: P, b: P, rho: f64) -> Vec<f64> {
    let w: Vec<char> = word.chars().collect();
    let (c1, c2, c3) = (w[0], w[1], w[2]);
    let end_centre = circle(b, c3, rho);
    let mut found = Vec::new();
    let mut keep = |len: f64| found.push(len);
    if c2 == 'S' {
        let target_lat = turn_sign(c3) * rho;
        let f = |t: f64| {
            let p = arc(a, c1, t, rho);
            let (s, c) = p.2.sin_cos();
            -(end_centre.0 - p.0) * s + (end_centre.1 - p.1) * c - target_lat
        };
        for t in roots(&f) {
            let p = arc(a, c1, t, rho);
            let (s, c) = p.2.sin_cos();
            let along = (end_centre.0 - p.0) * c + (end_centre.1 - p.1) * s;
            if along < -1e-9 {
                continue;
            }
            let q = wrap(turn_sign(c3) * (b.2 - p.2));
            keep(rho * (t + q) + along.max(0.0));
        }
    } else {
        let f = |t: f64| {
            let p = arc(a, c1, t, rho);
            let m = circle(p, c2, rho);
            (m.0 - end_centre.0).hypot(m.1 - end_centre.1) - 2.0 * rho
        };
        for t in roots(&f) {
            let p = arc(a, c1, t, rho);
            let m = circle(p, c2, rho);
            let q = (0.5 * (m.0 + end_centre.0), 0.5 * (m.1 + end_centre.1));
            // heading at the junction on the middle circle
            let h = (q.1 - m.1).atan2(q.0 - m.0) + turn_sign(c2) * FRAC_PI_2;
            let mid = wrap(turn_sign(c2) * (h - p.2));
            let last = wrap(turn_sign(c3) * (b.2 - h));
            keep(rho * (t + mid + last));
        }
    }
    found
}

/// Length of the best realization of `word`, if any.
pub fn word_length(word: &str, a: P, b: P, rho: f64) -> Option<f64> {
    realizations(word, a, b, rho).into_iter().reduce(f64::min)
}

pub const WORDS: [&str; 6] = ["LSL", "RSR", "RSL", "LSR", "RLR", "LRL"];

pub fn shortest(a: P, b: P, rho: f64) -> f64 {
    WORDS
        .iter()
        .filter_map(|w| word_length(w, a, b, rho))
        .fold(f64::INFINITY, f64::min)
}

pub fn normalize(p: P) -> P {
    (p.0, p.1, wrap(p.2))
}

pub fn mirror(p: P) -> P {
    normalize((p.0, -p.1, PI - p.2))
}

pub fn reflect(p: P) -> P {
    normalize((p.0, -p.1, -p.2))
}
