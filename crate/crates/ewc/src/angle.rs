//! Angles on the circle, normalized to `[-pi, pi)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// An angle in radians, kept in the half-open interval `[-pi, pi)`.
///
/// Construction reduces any finite input modulo `2*pi` into the canonical
/// range, so two `CircAngle`s compare equal whenever they denote the same
/// point on the circle.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CircAngle(f64);

impl CircAngle {
    pub fn new(radians: f64) -> Self {
        CircAngle(wrap_angle(radians))
    }

    /// The canonical representative in `[-pi, pi)`.
    pub fn radians(self) -> f64 {
        self.0
    }

    /// Unsigned angular distance to `other`, in `[0, pi]`.
    pub fn distance(self, other: CircAngle) -> f64 {
        wrap_angle(self.0 - other.0).abs()
    }
}

impl From<f64> for CircAngle {
    fn from(radians: f64) -> Self {
        CircAngle::new(radians)
    }
}

/// Reduce an angle into `[-pi, pi)`.
pub fn wrap_angle(x: f64) -> f64 {
    let mut r = x.rem_euclid(2.0 * PI);
    if r >= PI {
        r -= 2.0 * PI;
    }
    // rem_euclid can return exactly 2*pi for tiny negative inputs
    if r < -PI {
        r += 2.0 * PI;
    }
    r
}
