//! Disc automorphisms and the conformal-invariance properties of the
//! family: the weight-2 relative invariance of the two-pole density, the
//! weight-1 invariance of the wrapped Cauchy, the harmonic-measure
//! identity, and the convolution/conditioning constructions.

use num_complex::Complex64;

use crate::angle::{wrap_angle, CircAngle};
use crate::density::{wc_density, TWO_PI};
use crate::error::{EwcError, Result};
use crate::params::{DiskPoint, EwcParams, WcParams};
use crate::quad::periodic_integral;

/// The Mobius transformation `M(w) = alpha (w + beta) / (conj(beta) w + 1)`,
/// an automorphism of the closed unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    alpha: Complex64,
    beta: DiskPoint,
}

impl MobiusMap {
    pub fn new(alpha: Complex64, beta: DiskPoint) -> Result<Self> {
        if (alpha.norm() - 1.0).abs() > 1e-14 {
            return Err(EwcError::BadMobiusAlpha(alpha.norm()));
        }
        Ok(MobiusMap { alpha, beta })
    }

    pub fn identity() -> Self {
        MobiusMap {
            alpha: Complex64::ONE,
            beta: DiskPoint::origin(),
        }
    }

    pub fn rotation(gamma: f64) -> Self {
        MobiusMap {
            alpha: Complex64::from_polar(1.0, gamma),
            beta: DiskPoint::origin(),
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta.to_complex()
    }

    pub fn apply(&self, w: Complex64) -> Complex64 {
        let b = self.beta.to_complex();
        self.alpha * (w + b) / (b.conj() * w + Complex64::ONE)
    }

    /// The inverse map, again a disc automorphism:
    /// `M^{-1}(z) = (z/alpha - beta) / (1 - conj(beta) z/alpha)`.
    pub fn inverse(&self) -> Self {
        let b = self.beta.to_complex();
        MobiusMap {
            alpha: self.alpha.conj(),
            beta: DiskPoint::from_complex(-self.alpha * b).expect("|beta| preserved"),
        }
    }

    /// `M'(w) = alpha (1 - |beta|^2) / (conj(beta) w + 1)^2`.
    pub fn derivative(&self, w: Complex64) -> Complex64 {
        let b = self.beta.to_complex();
        let den = b.conj() * w + Complex64::ONE;
        self.alpha * (1.0 - b.norm_sqr()) / (den * den)
    }

    /// `|M'(z)|^2` on the circle.
    pub fn derivative_modulus_sq(&self, z: Complex64) -> f64 {
        self.derivative(z).norm_sqr()
    }
}

/// Relative residual of the weight-2 invariance identity for the two-pole
/// kernel, the product of the circle kernels of the two parameters:
/// `g(z; phi1, phi2) = g(M(z); M(phi1), M(phi2)) |M'(z)|^2`.
///
/// The normalized density obeys the same identity only up to the ratio of
/// its normalizing constants at the original and the mapped parameters;
/// that ratio is not constant in the parameters, which is exactly the
/// sense in which the family is not closed under these maps.
pub fn invariance_residual(z: Complex64, p: &EwcParams, m: &MobiusMap) -> Result<f64> {
    let phi1 = DiskPoint::from_complex(p.phi1())?;
    let phi2 = DiskPoint::from_complex(p.phi2())?;
    let lhs = kernel_product(z, phi1, phi2);
    let mz = unit_project(m.apply(z));
    let m_phi1 = DiskPoint::from_complex(m.apply(phi1.to_complex()))?;
    let m_phi2 = DiskPoint::from_complex(m.apply(phi2.to_complex()))?;
    let rhs = kernel_product(mz, m_phi1, m_phi2) * m.derivative_modulus_sq(z);
    Ok((lhs - rhs).abs() / lhs.max(rhs).max(1.0))
}

fn kernel_product(z: Complex64, phi1: DiskPoint, phi2: DiskPoint) -> f64 {
    wc_density_complex(z, phi1) * wc_density_complex(z, phi2)
}

/// Relative residual of the weight-1 identity for the wrapped Cauchy
/// density.
pub fn wc_weight1_residual(z: Complex64, phi1: DiskPoint, m: &MobiusMap) -> Result<f64> {
    let lhs = wc_density_complex(z, phi1);
    let mz = unit_project(m.apply(z));
    let m_phi1 = DiskPoint::from_complex(m.apply(phi1.to_complex()))?;
    let rhs = wc_density_complex(mz, m_phi1) * m.derivative(z).norm();
    Ok((lhs - rhs).abs() / lhs.max(rhs).max(1.0))
}

fn wc_density_complex(z: Complex64, phi: DiskPoint) -> f64 {
    let p = phi.to_complex();
    (1.0 - p.norm_sqr()) / (TWO_PI * (z - p).norm_sqr())
}

/// Map rounding can leave `|M(z)|` off the circle by a few ulps.
fn unit_project(z: Complex64) -> Complex64 {
    z / z.norm()
}

/// Test functions for the harmonic-measure identity: exactly harmonic
/// polynomials with closed-form values inside the disc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonicFn {
    Constant,
    RePower,
    ImPower,
}

/// Integrates the harmonic function against the wrapped Cauchy density
/// `C*(phi1)` and subtracts its value at `phi1`; the identity says the
/// result is zero.
pub fn poisson_integral_check(h: HarmonicFn, k: u32, phi1: DiskPoint) -> f64 {
    let eval = |z: Complex64| match h {
        HarmonicFn::Constant => 1.0,
        HarmonicFn::RePower => z.powu(k).re,
        HarmonicFn::ImPower => z.powu(k).im,
    };
    let integral = periodic_integral(
        &|t| {
            let z = Complex64::from_polar(1.0, t);
            eval(z) * wc_density_complex(z, phi1)
        },
        1024,
        1e-13,
    );
    integral - eval(phi1.to_complex())
}

/// Convolution of two wrapped Cauchy laws: locations add, concentrations
/// multiply.
pub fn wc_convolve(p1: &WcParams, p2: &WcParams) -> WcParams {
    WcParams::new(
        wrap_angle(p1.mu.radians() + p2.mu.radians()),
        p1.rho() * p2.rho(),
    )
    .expect("product of rhos stays in [0, 1)")
}

/// The conditioning construction `k(theta) = f(theta) g(tau - theta) / h(tau)`
/// for wrapped Cauchy `f` and `g`, where `h = f * g` is again wrapped Cauchy.
pub fn conditioning_density(
    f: &WcParams,
    g: &WcParams,
    tau: CircAngle,
    theta: CircAngle,
) -> f64 {
    let h = wc_convolve(f, g);
    wc_density(theta, f)
        * wc_density(CircAngle::new(tau.radians() - theta.radians()), g)
        / wc_density(tau, &h)
}
