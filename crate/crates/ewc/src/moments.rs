//! Trigonometric moments, circular summaries, and skewness.

use num_complex::Complex64;

use crate::angle::CircAngle;
use crate::density::ewc_density;
use crate::error::{EwcError, Result};
use crate::interval::EQUAL_PHI_TOL;
use crate::params::EwcParams;
use crate::quad::periodic_integral;

/// The `n`th trigonometric moment `E(Z^n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigMoment {
    pub n: u32,
    pub value: Complex64,
}

/// Mean direction, mean resultant length, and skewness.
///
/// The mean direction (and with it the skewness) is undefined on the locus
/// `phi1 = -phi2`, where the first moment vanishes; both are `None` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularSummary {
    pub mean_direction: Option<CircAngle>,
    pub mean_resultant_length: f64,
    pub skewness: Option<f64>,
}

/// Mean resultant lengths below this are treated as zero.
pub const MRL_ZERO_TOL: f64 = 1e-14;

pub fn trig_moment(n: u32, p: &EwcParams) -> TrigMoment {
    if n == 0 {
        return TrigMoment {
            n,
            value: Complex64::new(1.0, 0.0),
        };
    }
    let phi1 = p.phi1();
    let phi2 = p.phi2();
    let value = if (phi1 - phi2).norm() < EQUAL_PHI_TOL {
        // coincident parameters: the two simple poles merge into one of
        // order two and the general quotient becomes 0/0
        let m2 = phi1.norm_sqr();
        let nf = n as f64;
        phi1.powu(n) * ((1.0 + nf + (1.0 - nf) * m2) / (1.0 + m2))
    } else {
        let m1 = phi1.norm_sqr();
        let m2 = phi2.norm_sqr();
        let num = phi1.powu(n + 1) * (1.0 - m2) * (Complex64::ONE - phi1.conj() * phi2)
            - phi2.powu(n + 1) * (1.0 - m1) * (Complex64::ONE - phi1 * phi2.conj());
        let den = (phi1 - phi2) * (1.0 - (phi1 * phi2.conj()).norm_sqr());
        num / den
    };
    TrigMoment { n, value }
}

/// `E(Z)` in the single closed form valid for all parameters.
pub fn first_moment(p: &EwcParams) -> Complex64 {
    let phi1 = p.phi1();
    let phi2 = p.phi2();
    (phi1 * (1.0 - phi2.norm_sqr()) + phi2 * (1.0 - phi1.norm_sqr()))
        / (1.0 - (phi1 * phi2).norm_sqr())
}

pub fn circular_summary(p: &EwcParams) -> CircularSummary {
    let ez = first_moment(p);
    let mrl = ez.norm();
    if mrl < MRL_ZERO_TOL {
        CircularSummary {
            mean_direction: None,
            mean_resultant_length: mrl,
            skewness: None,
        }
    } else {
        CircularSummary {
            mean_direction: Some(CircAngle::new(ez.arg())),
            mean_resultant_length: mrl,
            skewness: skewness(p).ok(),
        }
    }
}

/// Closed-form circular skewness.
///
/// Near the boundary of the parameter space the `(1 - mrl)^{-3/2}` factor
/// can overflow; the result is then the signed infinity matching the sign
/// of `Im(phi1 conj(phi2)) (|phi1| - |phi2|)`.
pub fn skewness(p: &EwcParams) -> Result<f64> {
    let phi1 = p.phi1();
    let phi2 = p.phi2();
    let mrl = first_moment(p).norm();
    if mrl < MRL_ZERO_TOL {
        return Err(EwcError::UndefinedMeanDirection);
    }
    let cross = phi1 * phi2.conj();
    let one_minus = Complex64::ONE - cross;
    let m1 = phi1.norm_sqr();
    let m2 = phi2.norm_sqr();
    let s = one_minus.norm_sqr() / (1.0 - cross.norm_sqr()).powi(3)
        * mrl.powi(-2)
        * (1.0 - mrl).powf(-1.5)
        * cross.im
        * (m1 - m2)
        * (1.0 - m1)
        * (1.0 - m2);
    if s.is_nan() {
        // overflow in intermediate products: recover the sign
        let sign = (cross.im * (m1 - m2)).signum();
        return Ok(sign * f64::INFINITY);
    }
    Ok(s)
}

/// Skewness straight from its definition in terms of the first two moments.
///
/// Used as the second algebraic route against the closed form.
pub fn skewness_from_moments(p: &EwcParams) -> Result<f64> {
    let ez = first_moment(p);
    let delta = ez.norm();
    if delta < MRL_ZERO_TOL {
        return Err(EwcError::UndefinedMeanDirection);
    }
    let ez2 = trig_moment(2, p).value;
    let dir = ez.conj() / delta;
    Ok((ez2 * dir * dir).im / (1.0 - delta).powf(1.5))
}

/// Quadrature estimate of `E(Z^n)`: the independent oracle for the
/// residue-derived closed form.
pub fn moment_oracle(n: u32, p: &EwcParams) -> Complex64 {
    let nf = n as f64;
    let re = periodic_integral(
        &|t| (nf * t).cos() * ewc_density(CircAngle::new(t), p),
        1024,
        1e-13,
    );
    let im = periodic_integral(
        &|t| (nf * t).sin() * ewc_density(CircAngle::new(t), p),
        1024,
        1e-13,
    );
    Complex64::new(re, im)
}
