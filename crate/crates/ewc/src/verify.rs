//! Self-contained property sweeps for the closed-form results, runnable
//! from the command line. Each check compares a formula against an
//! independent oracle (quadrature, grid search, or simulation) on randomly
//! drawn parameter sets and reports the worst deviation seen.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::angle::CircAngle;
use crate::density::{ewc_density, TWO_PI};
use crate::interval::{cdf, interval_probability};
use crate::mobius::{
    invariance_residual, poisson_integral_check, wc_convolve, HarmonicFn, MobiusMap,
};
use crate::moments::{moment_oracle, skewness, skewness_from_moments, trig_moment};
use crate::params::{DiskPoint, EwcParams, WcParams};
use crate::quad::{adaptive_simpson, periodic_integral};
use crate::shape::{modality, quartic_discriminant, stationary_coeffs, Modality};
use crate::sphere::{sphere_density, surface_area, SphereParams, UnitVector};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed deviation and the tolerance it was compared against.
    pub worst: f64,
    pub tolerance: f64,
    pub cases: usize,
}

impl CheckResult {
    fn from_worst(name: &'static str, worst: f64, tolerance: f64, cases: usize) -> Self {
        CheckResult {
            name,
            passed: worst <= tolerance,
            worst,
            tolerance,
            cases,
        }
    }
}

fn random_params(rng: &mut ChaCha8Rng, rho_max: f64) -> EwcParams {
    EwcParams::new(
        rng.random::<f64>() * TWO_PI - PI,
        rng.random::<f64>() * TWO_PI - PI,
        rng.random::<f64>() * rho_max,
        rng.random::<f64>() * rho_max,
    )
    .expect("rho in range")
}

/// The density integrates to one.
pub fn check_normalization(sets: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..sets {
        let p = random_params(&mut rng, 0.95);
        let total = periodic_integral(&|t| ewc_density(CircAngle::new(t), &p), 256, 1e-13);
        worst = worst.max((total - 1.0).abs());
    }
    CheckResult::from_worst("normalization", worst, 1e-10, sets)
}

/// Closed-form interval probabilities match quadrature on random intervals,
/// exercising both the general and the equal-parameter branch.
pub fn check_interval(sets: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for i in 0..sets {
        let p = if i % 4 == 0 {
            let mu = rng.random::<f64>() * TWO_PI - PI;
            let rho = rng.random::<f64>() * 0.9;
            EwcParams::new(mu, mu, rho, rho).unwrap()
        } else {
            random_params(&mut rng, 0.9)
        };
        let mut a = rng.random::<f64>() * TWO_PI - PI;
        let mut b = rng.random::<f64>() * TWO_PI - PI;
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        if b - a < 1e-3 {
            continue;
        }
        let closed = interval_probability(CircAngle::new(a), CircAngle::new(b), &p).unwrap();
        let quad = adaptive_simpson(&|t| ewc_density(CircAngle::new(t), &p), a, b, 1e-12);
        worst = worst.max((closed - quad).abs());
    }
    CheckResult::from_worst("interval_probability", worst, 1e-9, sets)
}

/// The CDF is nondecreasing and reaches one.
pub fn check_cdf_monotone(sets: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..sets {
        let p = random_params(&mut rng, 0.95);
        let mut prev = 0.0;
        for k in 0..400 {
            let t = -PI + TWO_PI * k as f64 / 400.0;
            let f = cdf(CircAngle::new(t), &p);
            worst = worst.max(prev - f);
            prev = f;
        }
        let last = cdf(CircAngle::new(PI - 1e-13), &p);
        worst = worst.max(prev - last).max((last - 1.0).abs());
    }
    CheckResult::from_worst("cdf_monotone", worst, 1e-9, sets)
}

/// Closed-form trigonometric moments match quadrature for orders up to 8.
pub fn check_moments(sets: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..sets {
        let p = random_params(&mut rng, 0.95);
        for n in 0..=8u32 {
            let closed = trig_moment(n, &p).value;
            let quad = moment_oracle(n, &p);
            worst = worst.max((closed - quad).norm());
        }
    }
    CheckResult::from_worst("trig_moments", worst, 1e-10, sets)
}

/// The closed-form skewness equals the moment-definition route, and
/// vanishes for symmetric parameter sets.
pub fn check_skewness(sets: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for i in 0..sets {
        let p = if i % 3 == 0 {
            // symmetric: equal concentrations
            let rho = 0.05 + rng.random::<f64>() * 0.85;
            EwcParams::new(
                rng.random::<f64>() * TWO_PI - PI,
                rng.random::<f64>() * TWO_PI - PI,
                rho,
                rho,
            )
            .unwrap()
        } else {
            random_params(&mut rng, 0.9)
        };
        let (Ok(a), Ok(b)) = (skewness(&p), skewness_from_moments(&p)) else {
            continue;
        };
        if a.is_finite() && b.is_finite() {
            worst = worst.max((a - b).abs());
            if crate::shape::is_symmetric(&p).is_some() {
                worst = worst.max(a.abs());
            }
        }
    }
    CheckResult::from_worst("skewness", worst, 1e-9, sets)
}

/// The discriminant sign matches a fine grid count of local maxima.
pub fn check_modality(sets: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures: f64 = 0.0;
    let mut cases = 0;
    for _ in 0..sets {
        let p = random_params(&mut rng, 0.95);
        let coeffs = stationary_coeffs(&p);
        let disc = quartic_discriminant(&coeffs.quartic());
        let scale: f64 = coeffs
            .quartic()
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()))
            .powi(6);
        if disc.abs() < 1e-6 * scale.max(1e-300) {
            continue;
        }
        cases += 1;
        let grid_modes = count_grid_modes(&p, 4096);
        let expected = if disc > 0.0 { 2 } else { 1 };
        if grid_modes != expected {
            failures += 1.0;
        }
        if let Ok(report) = modality(&p) {
            let class_modes = match report.classification {
                Modality::Unimodal => 1,
                Modality::Bimodal => 2,
                Modality::Boundary => grid_modes,
            };
            if class_modes != grid_modes || report.modes.len() != grid_modes {
                failures += 1.0;
            }
        }
    }
    CheckResult::from_worst("modality", failures, 0.0, cases)
}

fn count_grid_modes(p: &EwcParams, n: usize) -> usize {
    let vals: Vec<f64> = (0..n)
        .map(|k| ewc_density(CircAngle::new(-PI + TWO_PI * k as f64 / n as f64), p))
        .collect();
    let mut count = 0;
    for k in 0..n {
        let prev = vals[(k + n - 1) % n];
        let next = vals[(k + 1) % n];
        if vals[k] > prev && vals[k] > next {
            count += 1;
        }
    }
    count
}

/// Weight-2 relative invariance under random disc automorphisms.
pub fn check_mobius(sets: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..sets {
        let p = random_params(&mut rng, 0.95);
        let alpha = Complex64::from_polar(1.0, rng.random::<f64>() * TWO_PI - PI);
        let beta = DiskPoint::from_complex(Complex64::from_polar(
            rng.random::<f64>() * 0.9,
            rng.random::<f64>() * TWO_PI - PI,
        ))
        .unwrap();
        let m = MobiusMap::new(alpha, beta).unwrap();
        let z = Complex64::from_polar(1.0, rng.random::<f64>() * TWO_PI - PI);
        worst = worst.max(invariance_residual(z, &p, &m).unwrap());
    }
    CheckResult::from_worst("mobius_invariance", worst, 1e-11, sets)
}

/// Harmonic polynomials integrate to their value at the disc parameter.
pub fn check_poisson(sets: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..sets {
        let phi = DiskPoint::from_complex(Complex64::from_polar(
            rng.random::<f64>() * 0.9,
            rng.random::<f64>() * TWO_PI - PI,
        ))
        .unwrap();
        for k in 1..=6 {
            worst = worst.max(poisson_integral_check(HarmonicFn::RePower, k, phi).abs());
            worst = worst.max(poisson_integral_check(HarmonicFn::ImPower, k, phi).abs());
        }
    }
    CheckResult::from_worst("poisson_integral", worst, 1e-10, sets)
}

/// Wrapped Cauchy convolution: locations add and concentrations multiply.
pub fn check_convolution(sets: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..sets {
        let a = WcParams::new(rng.random::<f64>() * TWO_PI - PI, rng.random::<f64>() * 0.9)
            .unwrap();
        let b = WcParams::new(rng.random::<f64>() * TWO_PI - PI, rng.random::<f64>() * 0.9)
            .unwrap();
        let c = wc_convolve(&a, &b);
        let tau = rng.random::<f64>() * TWO_PI - PI;
        let direct = periodic_integral(
            &|t| {
                crate::density::wc_density(CircAngle::new(t), &a)
                    * crate::density::wc_density(CircAngle::new(tau - t), &b)
            },
            512,
            1e-13,
        );
        worst = worst.max((direct - crate::density::wc_density(CircAngle::new(tau), &c)).abs());
    }
    CheckResult::from_worst("wc_convolution", worst, 1e-9, sets)
}

/// The spherical density at `d = 2` reduces to the circular one, and the
/// surface-area constant matches the classical values.
pub fn check_sphere_reduction(sets: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = (surface_area(2).unwrap() - TWO_PI).abs();
    worst = worst.max((surface_area(3).unwrap() - 2.0 * TWO_PI).abs());
    worst = worst.max((surface_area(4).unwrap() - TWO_PI * PI).abs());
    for _ in 0..sets {
        let p = random_params(&mut rng, 0.9);
        let sp = SphereParams::new(
            p.rho1(),
            UnitVector::from_angle(p.mu1.radians()),
            p.rho2(),
            UnitVector::from_angle(p.mu2.radians()),
        )
        .unwrap();
        let t = rng.random::<f64>() * TWO_PI - PI;
        let circle = ewc_density(CircAngle::new(t), &p);
        let sphere = sphere_density(&UnitVector::from_angle(t), &sp).unwrap();
        worst = worst.max((circle - sphere).abs());
    }
    CheckResult::from_worst("sphere_d2_reduction", worst, 1e-12, sets)
}

/// Default sweep used by the command-line `verify` subcommand.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    vec![
        check_normalization(50, seed),
        check_interval(100, seed.wrapping_add(1)),
        check_cdf_monotone(20, seed.wrapping_add(2)),
        check_moments(50, seed.wrapping_add(3)),
        check_skewness(100, seed.wrapping_add(4)),
        check_modality(200, seed.wrapping_add(5)),
        check_mobius(200, seed.wrapping_add(6)),
        check_poisson(20, seed.wrapping_add(7)),
        check_convolution(30, seed.wrapping_add(8)),
        check_sphere_reduction(100, seed.wrapping_add(9)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_default_checks_pass() {
        for check in run_all(424242) {
            assert!(
                check.passed,
                "{}: worst {} > tol {}",
                check.name, check.worst, check.tolerance
            );
        }
    }
}
