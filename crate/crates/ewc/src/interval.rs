//! Closed-form interval probabilities and the CDF.
//!
//! Two branches: a general antiderivative for distinct parameter pairs and a
//! separate form for the coincident pair, where the general denominator
//! vanishes. The branch is selected by the distance between the two disc
//! parameters.

use std::f64::consts::PI;

use crate::angle::{wrap_angle, CircAngle};
use crate::density::{normalizing_constant, wc_kernel};
use crate::error::{EwcError, Result};
use crate::params::EwcParams;

/// Below this distance between `phi1` and `phi2` the coincident-parameter
/// branch is used; the general branch's denominator is their squared
/// distance times a bounded factor and cancels catastrophically.
pub const EQUAL_PHI_TOL: f64 = 1e-8;

/// Above this distance the general antiderivative is accurate. In between,
/// its numerator cancels to roughly machine epsilon over the denominator,
/// so the probability is integrated numerically instead.
const GENERAL_PHI_TOL: f64 = 1e-2;

/// Half-width of the guard band around the antipode of each location
/// parameter, where `tan((theta - mu)/2)` blows up.
const TAN_GUARD: f64 = 1e-9;
const TAN_NUDGE: f64 = 1e-12;

/// `P(a < Theta <= b)` for `-pi <= a < b < pi`.
pub fn interval_probability(a: CircAngle, b: CircAngle, p: &EwcParams) -> Result<f64> {
    let (a, b) = (a.radians(), b.radians());
    if a >= b {
        return Err(EwcError::EmptyInterval { a, b });
    }
    let delta = (p.phi1() - p.phi2()).norm();
    let prob = if delta < EQUAL_PHI_TOL {
        equal_branch(a, b, p)
    } else if delta < GENERAL_PHI_TOL {
        crate::quad::adaptive_simpson(
            &|t| crate::density::ewc_density(CircAngle::new(t), p),
            a,
            b,
            1e-13,
        )
    } else {
        general_branch(a, b, p)
    };
    Ok(prob.clamp(0.0, 1.0))
}

/// CDF with reference point `-pi`: `F(theta) = P(-pi < Theta <= theta)`.
pub fn cdf(theta: CircAngle, p: &EwcParams) -> f64 {
    let t = theta.radians();
    if t <= -PI {
        return 0.0;
    }
    interval_probability(CircAngle::new(-PI), theta, p).expect("-pi < theta")
}

fn general_branch(a: f64, b: f64, p: &EwcParams) -> f64 {
    let (mu1, mu2) = (p.mu1.radians(), p.mu2.radians());
    let (r1, r2) = (p.rho1(), p.rho2());
    let dmu_cos = (mu1 - mu2).cos();
    let dmu_sin = (mu1 - mu2).sin();

    let c = normalizing_constant(p);
    let d = (p.phi1() - p.phi2()).norm_sqr()
        * (num_complex::Complex64::new(1.0, 0.0) - p.phi1() * p.phi2().conj()).norm_sqr();

    let log_term = r1 * r2 * dmu_sin
        * ((wc_kernel(b, mu2, r2) / wc_kernel(b, mu1, r1)).ln()
            - (wc_kernel(a, mu2, r2) / wc_kernel(a, mu1, r1)).ln());

    let coef1 =
        2.0 * r1 * (r1 * (1.0 + r2 * r2) - r2 * (1.0 + r1 * r1) * dmu_cos) / (1.0 - r1 * r1);
    let coef2 =
        2.0 * r2 * (r2 * (1.0 + r1 * r1) - r1 * (1.0 + r2 * r2) * dmu_cos) / (1.0 - r2 * r2);

    c / d * (log_term + coef1 * arctan_term(a, b, mu1, r1) + coef2 * arctan_term(a, b, mu2, r2))
}

fn equal_branch(a: f64, b: f64, p: &EwcParams) -> f64 {
    let mu = p.mu1.radians();
    let rho = p.rho1();
    let one_m = 1.0 - rho * rho;
    let c = normalizing_constant(p);
    let bracket = rho * (b - mu).sin() / wc_kernel(b, mu, rho)
        - rho * (a - mu).sin() / wc_kernel(a, mu, rho);
    2.0 * c / (one_m * one_m)
        * (bracket + (1.0 + rho * rho) / one_m * arctan_term(a, b, mu, rho))
}

/// `[arctan{(1+rho)/(1-rho) tan((theta-mu)/2)}]_a^b + A_mu`, where the
/// branch correction `A_mu` is `pi` when the interval crosses the antipode
/// of `mu` (detected by the tangent comparison).
fn arctan_term(a: f64, b: f64, mu: f64, rho: f64) -> f64 {
    let ta = half_tan(a, mu, true);
    let tb = half_tan(b, mu, false);
    let scale = (1.0 + rho) / (1.0 - rho);
    let mut v = (scale * tb).atan() - (scale * ta).atan();
    if ta > tb {
        v += PI;
    }
    v
}

/// `tan((x - mu)/2)` with the endpoint nudged off the antipode singularity,
/// toward the interval interior (`lower` marks the left endpoint).
fn half_tan(x: f64, mu: f64, lower: bool) -> f64 {
    let mut d = wrap_angle(x - mu);
    if d.abs() > PI - TAN_GUARD {
        d = if lower { -PI + TAN_NUDGE } else { PI - TAN_NUDGE };
    }
    (0.5 * d).tan()
}
