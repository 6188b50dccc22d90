//! Symmetry detection, stationary-point analysis, and modality
//! classification via the quartic discriminant, plus the symmetric
//! three-parameter submodels.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::angle::{wrap_angle, CircAngle};
use crate::density::{ewc_density, wc_kernel, TWO_PI};
use crate::error::{EwcError, Result};
use crate::params::{EwcParams, WcParams};

const SYMMETRY_TOL: f64 = 1e-12;

/// Coefficients of the stationary-point equation
/// `a0 + a1 cos t + a2 sin t + a3 cos t sin t + a4 cos^2 t = 0`,
/// written in the frame shifted so the second location parameter is zero.
#[derive(Debug, Clone, Copy)]
pub struct StationaryCoeffs {
    pub a: [f64; 5],
    /// The frame shift: stationary angles are `t + shift` in the original frame.
    pub shift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modality {
    Unimodal,
    Bimodal,
    /// Discriminant within tolerance of zero; the classification by sign
    /// is ill-conditioned here.
    Boundary,
}

#[derive(Debug, Clone)]
pub struct ModalityReport {
    pub discriminant: f64,
    pub classification: Modality,
    /// `(angle, density)` pairs, local maxima.
    pub modes: Vec<(CircAngle, f64)>,
    /// `(angle, density)` pairs, local minima.
    pub antimodes: Vec<(CircAngle, f64)>,
}

/// Symmetry test. Returns the symmetry axis when the density is symmetric.
///
/// Symmetry holds exactly when `rho1 = rho2`, some `rho_j = 0`,
/// `mu1 = mu2`, or `mu1 = mu2 + pi`.
pub fn is_symmetric(p: &EwcParams) -> Option<CircAngle> {
    let (r1, r2) = (p.rho1(), p.rho2());
    let (m1, m2) = (p.mu1.radians(), p.mu2.radians());
    let dmu = wrap_angle(m1 - m2);
    if r2 < SYMMETRY_TOL {
        return Some(p.mu1);
    }
    if r1 < SYMMETRY_TOL {
        return Some(p.mu2);
    }
    if dmu.abs() < SYMMETRY_TOL {
        return Some(p.mu2);
    }
    if (dmu.abs() - PI).abs() < SYMMETRY_TOL {
        return Some(p.mu2);
    }
    if (r1 - r2).abs() < SYMMETRY_TOL {
        // common rho: axis bisects the two locations
        let axis = (m1.sin() + m2.sin()).atan2(m1.cos() + m2.cos());
        return Some(CircAngle::new(axis));
    }
    None
}

pub fn stationary_coeffs(p: &EwcParams) -> StationaryCoeffs {
    let (r1, r2) = (p.rho1(), p.rho2());
    let dmu = wrap_angle(p.mu1.radians() - p.mu2.radians());
    let (s, c) = dmu.sin_cos();
    StationaryCoeffs {
        a: [
            2.0 * r1 * r2 * s,
            r1 * (1.0 + r2 * r2) * s,
            -r1 * (1.0 + r2 * r2) * c - r2 * (1.0 + r1 * r1),
            4.0 * r1 * r2 * c,
            -4.0 * r1 * r2 * s,
        ],
        shift: p.mu2.radians(),
    }
}

impl StationaryCoeffs {
    /// The stationary equation's left-hand side at shifted angle `t`.
    pub fn eval(&self, t: f64) -> f64 {
        let (s, c) = t.sin_cos();
        self.a[0] + self.a[1] * c + self.a[2] * s + self.a[3] * c * s + self.a[4] * c * c
    }

    fn eval_deriv(&self, t: f64) -> f64 {
        let (s, c) = t.sin_cos();
        let (s2, c2) = (2.0 * t).sin_cos();
        -self.a[1] * s + self.a[2] * c + self.a[3] * c2 - self.a[4] * s2
    }

    /// Quartic coefficients `[c4, c3, c2, c1, c0]` after `x = tan(t/2)`.
    pub fn quartic(&self) -> [f64; 5] {
        let [a0, a1, a2, a3, a4] = self.a;
        [
            a0 - a1 + a4,
            2.0 * (a2 - a3),
            2.0 * (a0 - a4),
            2.0 * (a2 + a3),
            a0 + a1 + a4,
        ]
    }
}

/// Discriminant of `c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0`.
pub fn quartic_discriminant(c: &[f64; 5]) -> f64 {
    let [a, b, cc, d, e] = *c;
    256.0 * a.powi(3) * e.powi(3) - 192.0 * a * a * b * d * e * e
        - 128.0 * a * a * cc * cc * e * e
        + 144.0 * a * a * cc * d * d * e
        - 27.0 * a * a * d.powi(4)
        + 144.0 * a * b * b * cc * e * e
        - 6.0 * a * b * b * d * d * e
        - 80.0 * a * b * cc * cc * d * e
        + 18.0 * a * b * cc * d.powi(3)
        + 16.0 * a * cc.powi(4) * e
        - 4.0 * a * cc.powi(3) * d * d
        - 27.0 * b.powi(4) * e * e
        + 18.0 * b.powi(3) * cc * d * e
        - 4.0 * b.powi(3) * d.powi(3)
        - 4.0 * b * b * cc.powi(3) * e
        + b * b * cc * cc * d * d
}

/// Classify the density as unimodal or bimodal and locate all modes and
/// antimodes.
///
/// The stationary equation becomes a quartic under `x = tan(t/2)`; the sign
/// of its discriminant separates the two regimes. `t = pi` is lost by the
/// substitution and is checked as an extra candidate.
pub fn modality(p: &EwcParams) -> Result<ModalityReport> {
    if p.rho1() == 0.0 && p.rho2() == 0.0 {
        return Err(EwcError::UniformNoModes);
    }
    let coeffs = stationary_coeffs(p);
    let q = coeffs.quartic();
    let disc = quartic_discriminant(&q);
    let cmax = q.iter().fold(0.0f64, |m, &c| m.max(c.abs()));
    // the discriminant is degree-6 homogeneous in the coefficients
    let boundary_tol = 1e-10 * cmax.powi(6);

    let mut candidates: Vec<f64> = real_roots(&q)
        .into_iter()
        .map(|x| 2.0 * x.atan())
        .collect();
    candidates.push(PI);

    // polish on the stationary equation itself and drop non-roots
    let mut stationary: Vec<f64> = Vec::new();
    for t0 in candidates {
        if let Some(t) = newton_polish(&coeffs, t0) {
            let t = wrap_angle(t);
            if stationary
                .iter()
                .all(|&u| wrap_angle(t - u).abs() > 1e-6)
            {
                stationary.push(t);
            }
        }
    }

    let mut modes = Vec::new();
    let mut antimodes = Vec::new();
    let h = 1e-4;
    for &t in &stationary {
        let theta = CircAngle::new(t + coeffs.shift);
        let f0 = ewc_density(theta, p);
        let fp = ewc_density(CircAngle::new(t + coeffs.shift + h), p);
        let fm = ewc_density(CircAngle::new(t + coeffs.shift - h), p);
        if fp + fm - 2.0 * f0 < 0.0 {
            modes.push((theta, f0));
        } else {
            antimodes.push((theta, f0));
        }
    }
    modes.sort_by(|a, b| b.1.total_cmp(&a.1));
    antimodes.sort_by(|a, b| a.1.total_cmp(&b.1));

    let classification = if disc.abs() < boundary_tol {
        Modality::Boundary
    } else if disc > 0.0 {
        Modality::Bimodal
    } else {
        Modality::Unimodal
    };
    Ok(ModalityReport {
        discriminant: disc,
        classification,
        modes,
        antimodes,
    })
}

fn newton_polish(coeffs: &StationaryCoeffs, t0: f64) -> Option<f64> {
    let scale = coeffs.a.iter().fold(0.0f64, |m, &c| m.max(c.abs()));
    let mut t = t0;
    for _ in 0..50 {
        let g = coeffs.eval(t);
        let dg = coeffs.eval_deriv(t);
        if dg.abs() < 1e-300 {
            break;
        }
        let step = g / dg;
        t -= step;
        if step.abs() < 1e-14 {
            break;
        }
    }
    if coeffs.eval(t).abs() < 1e-9 * scale.max(1.0) && wrap_angle(t - t0).abs() < 0.3 {
        Some(t)
    } else {
        None
    }
}

/// Real roots of a polynomial of degree at most four, by companion-matrix
/// eigenvalues.
fn real_roots(coeffs: &[f64; 5]) -> Vec<f64> {
    let cmax = coeffs.iter().fold(0.0f64, |m, &c| m.max(c.abs()));
    if cmax == 0.0 {
        return Vec::new();
    }
    // trim negligible leading coefficients
    let mut lead = 0;
    while lead < 4 && coeffs[lead].abs() < 1e-13 * cmax {
        lead += 1;
    }
    let deg = 4 - lead;
    if deg == 0 {
        return Vec::new();
    }
    let monic: Vec<f64> = coeffs[lead + 1..]
        .iter()
        .map(|&c| c / coeffs[lead])
        .collect();
    let n = deg;
    let companion = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -monic[n - 1 - i]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() < 1e-6 * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect()
}

/// The symmetric submodel with a common location and `rho1` extended to
/// `(-1, 1)`; negative `rho1` places the first factor's pole at the antipode.
pub fn symmetric1_density(theta: CircAngle, mu: CircAngle, rho1: f64, rho2: f64) -> Result<f64> {
    if !(-1.0..1.0).contains(&rho1) {
        return Err(EwcError::RhoOutOfRange(rho1));
    }
    if !(0.0..1.0).contains(&rho2) {
        return Err(EwcError::RhoOutOfRange(rho2));
    }
    let t = theta.radians();
    let m = mu.radians();
    Ok((1.0 - rho1 * rho2) / (TWO_PI * (1.0 + rho1 * rho2))
        * (1.0 - rho1 * rho1)
        / wc_kernel(t, m, rho1)
        * (1.0 - rho2 * rho2)
        / wc_kernel(t, m, rho2))
}

/// Two-component wrapped Cauchy mixture equal to the symmetric submodel
/// with `rho1 <= 0`: weight `p` on `WC(mu + pi, -rho1)`, the rest on
/// `WC(mu, rho2)`.
pub fn mixture_decomposition(
    mu: CircAngle,
    rho1: f64,
    rho2: f64,
) -> Result<(f64, WcParams, WcParams)> {
    if rho1 > 0.0 {
        return Err(EwcError::MixtureRhoNonNegative(rho1));
    }
    if rho1 <= -1.0 || !(0.0..1.0).contains(&rho2) {
        return Err(EwcError::RhoOutOfRange(rho1.min(rho2)));
    }
    let p = if rho1 == 0.0 {
        0.0
    } else {
        -rho1 * (1.0 - rho2 * rho2) / ((1.0 + rho1 * rho2) * (rho2 - rho1))
    };
    let first = WcParams::new(mu.radians() + PI, -rho1)?;
    let second = WcParams::new(mu, rho2)?;
    Ok((p, first, second))
}

/// Unimodality test for the common-concentration submodel `rho1 = rho2`:
/// unimodal iff `|mu1 - mu2| <= 2 arccos(2 rho / (1 + rho^2))`.
pub fn symmetric2_unimodality(rho: f64, dmu: CircAngle) -> bool {
    let ratio = (2.0 * rho / (1.0 + rho * rho)).clamp(0.0, 1.0);
    dmu.radians().abs() <= 2.0 * ratio.acos()
}
