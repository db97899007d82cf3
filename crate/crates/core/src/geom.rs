//! Planar points and angle helpers shared by every module.

use std::f64::consts::{PI, TAU};

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }

    /// Bearing of `other` seen from `self`, normalized to `[0, 2π)`.
    pub fn bearing_to(self, other: Point) -> f64 {
        normalize_angle((other.y - self.y).atan2(other.x - self.x))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Maps any finite angle into `[0, 2π)`.
///
/// Values that round up to exactly `2π` are folded to `0` so the half-open
/// interval holds after floating-point rounding.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Smallest absolute difference between two headings, in `[0, π]`.
pub fn angle_gap(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    if d > PI {
        TAU - d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_stays_half_open() {
        assert_eq!(normalize_angle(-1e-300), 0.0);
        assert_eq!(normalize_angle(TAU), 0.0);
        assert!((normalize_angle(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
        assert!(normalize_angle(-f64::MIN_POSITIVE) < TAU);
    }

    #[test]
    fn gap_is_symmetric() {
        assert!((angle_gap(0.1, TAU - 0.1) - 0.2).abs() < 1e-12);
        assert!((angle_gap(TAU - 0.1, 0.1) - 0.2).abs() < 1e-12);
        assert_eq!(angle_gap(1.0, 1.0), 0.0);
    }
}
