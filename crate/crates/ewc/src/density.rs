//! Densities of the wrapped Cauchy and extended wrapped Cauchy families.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::angle::CircAngle;
use crate::error::{EwcError, Result};
use crate::params::{DiskPoint, EwcParams, WcParams};

pub const TWO_PI: f64 = 2.0 * PI;

/// The wrapped Cauchy kernel `1 + rho^2 - 2 rho cos(theta - mu)`.
#[inline]
pub fn wc_kernel(theta: f64, mu: f64, rho: f64) -> f64 {
    1.0 + rho * rho - 2.0 * rho * (theta - mu).cos()
}

/// Wrapped Cauchy density at `theta`.
pub fn wc_density(theta: CircAngle, p: &WcParams) -> f64 {
    let rho = p.rho();
    (1.0 - rho * rho) / (TWO_PI * wc_kernel(theta.radians(), p.mu.radians(), rho))
}

/// The normalizing constant of the four-parameter density.
pub fn normalizing_constant(p: &EwcParams) -> f64 {
    let (r1, r2) = (p.rho1(), p.rho2());
    let dmu = p.mu1.radians() - p.mu2.radians();
    let r1r2 = r1 * r2;
    (1.0 - r1 * r1) * (1.0 - r2 * r2) * (1.0 + r1r2 * r1r2 - 2.0 * r1r2 * dmu.cos())
        / (TWO_PI * (1.0 - r1r2 * r1r2))
}

/// Density of the four-parameter family at `theta`.
pub fn ewc_density(theta: CircAngle, p: &EwcParams) -> f64 {
    let t = theta.radians();
    normalizing_constant(p)
        / (wc_kernel(t, p.mu1.radians(), p.rho1()) * wc_kernel(t, p.mu2.radians(), p.rho2()))
}

/// Log-density, formed term by term so that near-boundary `rho` does not
/// underflow the kernel product.
pub fn log_density(theta: CircAngle, p: &EwcParams) -> f64 {
    let t = theta.radians();
    let (r1, r2) = (p.rho1(), p.rho2());
    let dmu = p.mu1.radians() - p.mu2.radians();
    let r1r2 = r1 * r2;
    let log_c = (1.0 - r1 * r1).ln() + (1.0 - r2 * r2).ln()
        + (1.0 + r1r2 * r1r2 - 2.0 * r1r2 * dmu.cos()).ln()
        - TWO_PI.ln()
        - (1.0 - r1r2 * r1r2).ln();
    log_c
        - wc_kernel(t, p.mu1.radians(), r1).ln()
        - wc_kernel(t, p.mu2.radians(), r2).ln()
}

/// Density in the complex parametrization, with respect to arc length.
///
/// `z` must lie on the unit circle to within `1e-12`.
pub fn ewc_density_complex(z: Complex64, phi1: DiskPoint, phi2: DiskPoint) -> Result<f64> {
    let norm = z.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(EwcError::NotOnCircle(norm));
    }
    let p1 = phi1.to_complex();
    let p2 = phi2.to_complex();
    let cross = Complex64::new(1.0, 0.0) - p1 * p2.conj();
    let prod_sq = (p1 * p2.conj()).norm_sqr();
    Ok(cross.norm_sqr() / (TWO_PI * (1.0 - prod_sq))
        * (1.0 - p1.norm_sqr())
        / (z - p1).norm_sqr()
        * (1.0 - p2.norm_sqr())
        / (z - p2).norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::periodic_integral;

    fn angle(x: f64) -> CircAngle {
        CircAngle::new(x)
    }

    #[test]
    fn wc_density_uniform_and_mode() {
        let uni = WcParams::new(0.3, 0.0).unwrap();
        assert!((wc_density(angle(1.0), &uni) - 0.1591549431).abs() < 1e-9);
        let p = WcParams::new(0.7, 0.5).unwrap();
        assert!((wc_density(angle(0.7), &p) - 3.0 / TWO_PI).abs() < 1e-12);
    }

    #[test]
    fn wc_density_integrates_to_one() {
        for rho in [0.1, 0.5, 0.9] {
            let p = WcParams::new(0.4, rho).unwrap();
            let integral = periodic_integral(&|t| wc_density(angle(t), &p), 2048, 1e-13);
            assert!((integral - 1.0).abs() < 1e-12, "rho = {rho}");
        }
    }

    #[test]
    fn normalizing_constant_special_cases() {
        let uni = EwcParams::new(0.0, 0.0, 0.0, 0.0).unwrap();
        assert!((normalizing_constant(&uni) - 1.0 / TWO_PI).abs() < 1e-15);
        let wc = EwcParams::new(1.0, -2.0, 0.6, 0.0).unwrap();
        assert!((normalizing_constant(&wc) - (1.0 - 0.36) / TWO_PI).abs() < 1e-15);
    }

    #[test]
    fn normalizing_constant_matches_quadrature() {
        let p = EwcParams::new(0.5, -1.2, 0.7, 0.4).unwrap();
        let kernel_integral = periodic_integral(
            &|t| {
                1.0 / (wc_kernel(t, p.mu1.radians(), p.rho1())
                    * wc_kernel(t, p.mu2.radians(), p.rho2()))
            },
            2048,
            1e-13,
        );
        assert!((normalizing_constant(&p) - 1.0 / kernel_integral).abs() < 1e-12);
    }

    #[test]
    fn reduces_to_wrapped_cauchy_when_rho2_zero() {
        let p = EwcParams::new(0.9, 2.0, 0.65, 0.0).unwrap();
        let wc = WcParams::new(0.9, 0.65).unwrap();
        for k in 0..100 {
            let t = angle(-PI + TWO_PI * k as f64 / 100.0);
            assert!((ewc_density(t, &p) - wc_density(t, &wc)).abs() < 1e-14);
        }
    }

    #[test]
    fn equal_parameter_closed_form() {
        // mu1 = mu2, rho1 = rho2: the heavy-tailed one-peak submodel
        let (mu, rho) = (0.8, 0.55);
        let p = EwcParams::new(mu, mu, rho, rho).unwrap();
        let r2 = rho * rho;
        for k in 0..64 {
            let t = -PI + TWO_PI * k as f64 / 64.0;
            let expect = (1.0 - r2) / (TWO_PI * (1.0 + r2))
                * ((1.0 - r2) / wc_kernel(t, mu, rho)).powi(2);
            assert!((ewc_density(angle(t), &p) - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn complex_parametrization_agrees() {
        let p = EwcParams::new(0.5, -1.2, 0.7, 0.4).unwrap();
        let phi1 = DiskPoint::from_complex(p.phi1()).unwrap();
        let phi2 = DiskPoint::from_complex(p.phi2()).unwrap();
        for k in 0..100 {
            let t = -PI + TWO_PI * k as f64 / 100.0;
            let z = Complex64::from_polar(1.0, t);
            let via_complex = ewc_density_complex(z, phi1, phi2).unwrap();
            let via_real = ewc_density(angle(t), &p);
            assert!((via_complex - via_real).abs() / via_real < 1e-13);
        }
    }

    #[test]
    fn complex_form_rejects_off_circle_points() {
        let z = Complex64::new(0.9, 0.0);
        assert!(ewc_density_complex(z, DiskPoint::origin(), DiskPoint::origin()).is_err());
        let ok = Complex64::new(1.0, 0.0);
        let v = ewc_density_complex(ok, DiskPoint::origin(), DiskPoint::origin()).unwrap();
        assert!((v - 1.0 / TWO_PI).abs() < 1e-15);
    }

    #[test]
    fn label_exchange_invariance() {
        let p = EwcParams::new(0.5, -1.2, 0.7, 0.4).unwrap();
        let q = p.swapped();
        for k in 0..50 {
            let t = angle(-PI + TWO_PI * k as f64 / 50.0);
            assert!((ewc_density(t, &p) - ewc_density(t, &q)).abs() < 1e-15);
        }
    }

    #[test]
    fn log_density_is_finite_near_boundary() {
        let p = EwcParams::new(0.3, -0.3, 0.999, 0.5).unwrap();
        let ld = log_density(angle(0.3), &p);
        assert!(ld.is_finite());
        assert!((ld.exp() - ewc_density(angle(0.3), &p)).abs() / ewc_density(angle(0.3), &p) < 1e-12);
        let uni = EwcParams::new(0.0, 0.0, 0.0, 0.0).unwrap();
        assert!((log_density(angle(1.0), &uni) + TWO_PI.ln()).abs() < 1e-14);
    }
}
