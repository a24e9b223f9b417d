//! Angle wrapping helpers shared by every module.

use std::f64::consts::{PI, TAU};

/// Wraps an angle into the half-open interval (−π, π].
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Signed smallest difference `a - b`, wrapped into (−π, π].
pub fn angle_diff(a: f64, b: f64) -> f64 {
    normalize_angle(a - b)
}
