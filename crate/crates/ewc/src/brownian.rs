//! Random-walk validation of the two exit-point derivations of the
//! four-parameter density: conditioning a single walk on its later exit
//! through an outer circle, and conditioning two independent wrapped
//! Cauchy exit points on coincidence.
//!
//! Conditioning on the measure-zero event is realized as an
//! accept-if-close window of half-width `epsilon` in angular distance,
//! which biases the accepted density by `O(epsilon^2)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::{wrap_angle, CircAngle};
use crate::density::ewc_density;
use crate::error::{EwcError, Result};
use crate::interval::cdf;
use crate::params::{EwcParams, WcParams};
use crate::sampling::{wc_draw, SampleBatch, SampleDiagnostics, SampleMethod};
use crate::stats::{histogram_l1, ks_statistic};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WalkConfig {
    /// Gaussian increment scale per axis near the boundary (sqrt of the
    /// time step). Steps grow with distance from the target circle; the
    /// exit law of an isotropically time-changed walk is unchanged, and
    /// the crossing bias stays `O(step_std)`.
    pub step_std: f64,
    pub max_steps: usize,
    /// Angular half-width of the conditioning window.
    pub epsilon: f64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            step_std: 0.005,
            max_steps: 50_000_000,
            epsilon: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OracleReport {
    pub n_accepted: usize,
    pub n_attempted: usize,
    /// L1 distance between the accepted-sample histogram and the closed-form
    /// density.
    pub l1_distance: f64,
    pub ks_statistic: f64,
    pub bin_count: usize,
}

pub const DEFAULT_BINS: usize = 72;

/// Below this acceptance rate the window is considered too small for the
/// simulation budget.
const ACCEPTANCE_FLOOR: f64 = 1e-5;

/// Run one walk from `start` until it first crosses the circle of the given
/// radius; returns the angle of the crossing point.
pub fn simulate_exit<R: Rng>(
    start: [f64; 2],
    radius: f64,
    cfg: &WalkConfig,
    rng: &mut R,
) -> Result<CircAngle> {
    let r0 = (start[0] * start[0] + start[1] * start[1]).sqrt();
    if r0 >= radius {
        return Err(EwcError::StartOutsideCircle(r0));
    }
    let mut x = start;
    for _ in 0..cfg.max_steps {
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        let step = (0.2 * (radius - r)).clamp(cfg.step_std, 0.5);
        let dx: f64 = rng.sample::<f64, _>(StandardNormal) * step;
        let dy: f64 = rng.sample::<f64, _>(StandardNormal) * step;
        let nx = [x[0] + dx, x[1] + dy];
        if nx[0] * nx[0] + nx[1] * nx[1] >= radius * radius {
            let c = crossing_point(x, [dx, dy], radius);
            return Ok(CircAngle::new(c[1].atan2(c[0])));
        }
        x = nx;
    }
    Err(EwcError::MaxStepsExceeded(cfg.max_steps))
}

/// Linear interpolation of the boundary crossing along the final segment,
/// projected radially onto the circle.
fn crossing_point(x: [f64; 2], d: [f64; 2], radius: f64) -> [f64; 2] {
    let a = d[0] * d[0] + d[1] * d[1];
    let b = 2.0 * (x[0] * d[0] + x[1] * d[1]);
    let c = x[0] * x[0] + x[1] * x[1] - radius * radius;
    let t = (-b + (b * b - 4.0 * a * c).max(0.0).sqrt()) / (2.0 * a);
    let p = [x[0] + t * d[0], x[1] + t * d[1]];
    let norm = (p[0] * p[0] + p[1] * p[1]).sqrt();
    [radius * p[0] / norm, radius * p[1] / norm]
}

/// One conditioning attempt: exit the unit circle, keep walking to the
/// outer circle, report both exit angles.
fn walk_pair(p: &EwcParams, cfg: &WalkConfig, rng: &mut ChaCha8Rng) -> Result<(f64, f64)> {
    let start = [
        p.rho1() * p.mu1.radians().cos(),
        p.rho1() * p.mu1.radians().sin(),
    ];
    let theta1 = simulate_exit(start, 1.0, cfg, rng)?;
    let outer = 1.0 / p.rho2();
    let from_circle = [theta1.radians().cos(), theta1.radians().sin()];
    let theta2 = simulate_exit(from_circle, outer, cfg, rng)?;
    Ok((theta1.radians(), theta2.radians()))
}

/// Walk-based sampler for the conditional exit construction: the first
/// exit angle of a walk, conditioned on the angle at which the same walk
/// later leaves the circle of radius `1/rho2`.
pub fn conditional_exit_sample(
    p: &EwcParams,
    n_target: usize,
    cfg: &WalkConfig,
    seed: u64,
) -> Result<(SampleBatch, OracleReport)> {
    if p.rho2() <= 0.0 {
        return Err(EwcError::InvalidInput(
            "conditional exit walk needs rho2 > 0".into(),
        ));
    }
    let mu2 = p.mu2.radians();
    let mut accepted: Vec<f64> = Vec::with_capacity(n_target);
    let mut attempts: usize = 0;
    let batch_size = 8192;
    while accepted.len() < n_target {
        // attempts are independently seeded so the result does not depend
        // on thread scheduling
        let results: Vec<Option<f64>> = (attempts..attempts + batch_size)
            .into_par_iter()
            .map(|idx| {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(seed ^ (idx as u64).wrapping_mul(0x9e3779b97f4a7c15));
                let (t1, t2) = walk_pair(p, cfg, &mut rng).ok()?;
                (wrap_angle(t2 - mu2).abs() < cfg.epsilon).then_some(t1)
            })
            .collect();
        attempts += batch_size;
        accepted.extend(results.into_iter().flatten());
        if attempts >= 200_000 {
            let rate = accepted.len() as f64 / attempts as f64;
            if rate < ACCEPTANCE_FLOOR {
                return Err(EwcError::AcceptanceTooLow {
                    rate,
                    floor: ACCEPTANCE_FLOOR,
                });
            }
        }
    }
    accepted.truncate(n_target);
    Ok(report_and_batch(
        accepted,
        attempts,
        p,
        seed,
        SampleMethod::Rejection,
    ))
}

/// Coincidence-conditioning sampler: two independent wrapped Cauchy exit
/// angles, the first kept when it lands within `epsilon` of the second.
pub fn conditional_equal_sample(
    p: &EwcParams,
    n_target: usize,
    epsilon: f64,
    seed: u64,
) -> Result<(SampleBatch, OracleReport)> {
    let wc1 = WcParams::new(p.mu1, p.rho1())?;
    let wc2 = WcParams::new(p.mu2, p.rho2())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted = Vec::with_capacity(n_target);
    let mut attempts: usize = 0;
    while accepted.len() < n_target {
        attempts += 1;
        let t1 = wc_draw(&mut rng, &wc1);
        let t2 = wc_draw(&mut rng, &wc2);
        if wrap_angle(t1 - t2).abs() < epsilon {
            accepted.push(wrap_angle(t1));
        }
        if attempts % 1_000_000 == 0 {
            let rate = accepted.len() as f64 / attempts as f64;
            if rate < ACCEPTANCE_FLOOR {
                return Err(EwcError::AcceptanceTooLow {
                    rate,
                    floor: ACCEPTANCE_FLOOR,
                });
            }
        }
    }
    Ok(report_and_batch(
        accepted,
        attempts,
        p,
        seed,
        SampleMethod::Rejection,
    ))
}

fn report_and_batch(
    accepted: Vec<f64>,
    attempts: usize,
    p: &EwcParams,
    seed: u64,
    method: SampleMethod,
) -> (SampleBatch, OracleReport) {
    let angles: Vec<CircAngle> = accepted.iter().map(|&t| CircAngle::new(t)).collect();
    let l1 = histogram_l1(&angles, DEFAULT_BINS, |t| {
        ewc_density(CircAngle::new(t), p)
    });
    let mut sorted = accepted;
    sorted.sort_by(f64::total_cmp);
    let ks = ks_statistic(&sorted, |t| cdf(CircAngle::new(t), p));
    let n_accepted = angles.len();
    (
        SampleBatch {
            angles,
            seed,
            method,
            diagnostics: SampleDiagnostics {
                acceptance_rate: Some(n_accepted as f64 / attempts.max(1) as f64),
                effective_sample_size: None,
            },
        },
        OracleReport {
            n_accepted,
            n_attempted: attempts,
            l1_distance: l1,
            ks_statistic: ks,
            bin_count: DEFAULT_BINS,
        },
    )
}
