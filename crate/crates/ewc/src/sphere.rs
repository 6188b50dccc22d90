//! The spherical generalization: exit densities on the unit sphere of
//! `R^d`, the two-pole extension, and its samplers.
//!
//! Dimension convention: the unit sphere lives in `R^d`, so `d = 2` is the
//! circle. This differs from the common usage where `S^d` sits in
//! `R^{d+1}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{EwcError, Result};
use crate::sampling::McmcConfig;

/// A point on the unit sphere of `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitVector {
    coords: Vec<f64>,
}

impl UnitVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(EwcError::BadDimension(coords.len()));
        }
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(EwcError::NotUnitVector(norm));
        }
        Ok(UnitVector { coords })
    }

    /// Normalize an arbitrary nonzero vector onto the sphere.
    pub fn normalize(mut coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(EwcError::BadDimension(coords.len()));
        }
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(EwcError::NotUnitVector(norm));
        }
        for c in coords.iter_mut() {
            *c /= norm;
        }
        Ok(UnitVector { coords })
    }

    pub fn from_angle(theta: f64) -> Self {
        UnitVector {
            coords: vec![theta.cos(), theta.sin()],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// `||self - scale * other||`.
    pub fn distance_to_scaled(&self, scale: f64, other: &UnitVector) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| {
                let d = a - scale * b;
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    /// The angle of a 2-dimensional unit vector.
    pub fn angle(&self) -> f64 {
        self.coords[1].atan2(self.coords[0])
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SphereParams {
    pub d: usize,
    pub rho1: f64,
    pub eta1: UnitVector,
    pub rho2: f64,
    pub eta2: UnitVector,
}

impl SphereParams {
    pub fn new(rho1: f64, eta1: UnitVector, rho2: f64, eta2: UnitVector) -> Result<Self> {
        for rho in [rho1, rho2] {
            if !(0.0..1.0).contains(&rho) {
                return Err(EwcError::RhoOutOfRange(rho));
            }
        }
        if eta1.dim() != eta2.dim() {
            return Err(EwcError::DimensionMismatch(eta1.dim(), eta2.dim()));
        }
        Ok(SphereParams {
            d: eta1.dim(),
            rho1,
            eta1,
            rho2,
            eta2,
        })
    }

    pub fn swapped(&self) -> Self {
        SphereParams {
            d: self.d,
            rho1: self.rho2,
            eta1: self.eta2.clone(),
            rho2: self.rho1,
            eta2: self.eta1.clone(),
        }
    }
}

/// Surface area of the unit sphere in `R^d`: `2 pi^{d/2} / Gamma(d/2)`.
pub fn surface_area(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(EwcError::BadDimension(d));
    }
    let half = d as f64 / 2.0;
    Ok((std::f64::consts::PI.ln() * half + std::f64::consts::LN_2 - ln_gamma(half)).exp())
}

/// Lanczos log-gamma, positive arguments.
fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Density of the exit distribution with pole `rho1 * eta1`.
pub fn exit_density(x: &UnitVector, rho1: f64, eta1: &UnitVector) -> Result<f64> {
    if x.dim() != eta1.dim() {
        return Err(EwcError::DimensionMismatch(x.dim(), eta1.dim()));
    }
    let d = x.dim();
    let area = surface_area(d)?;
    let dist = x.distance_to_scaled(rho1, eta1);
    Ok((1.0 - rho1 * rho1) / (area * dist.powi(d as i32)))
}

/// Density of the two-pole extension on the sphere.
pub fn sphere_density(x: &UnitVector, p: &SphereParams) -> Result<f64> {
    if x.dim() != p.d {
        return Err(EwcError::DimensionMismatch(x.dim(), p.d));
    }
    let d = p.d as f64;
    let area = surface_area(p.d)?;
    let r1r2 = p.rho1 * p.rho2;
    let front = (1.0 + r1r2 * r1r2 - 2.0 * r1r2 * p.eta1.dot(&p.eta2)).powf(d / 2.0)
        / (1.0 - r1r2 * r1r2);
    let d1 = x.distance_to_scaled(p.rho1, &p.eta1);
    let d2 = x.distance_to_scaled(p.rho2, &p.eta2);
    Ok(front / area * (1.0 - p.rho1 * p.rho1) / d1.powi(p.d as i32) * (1.0 - p.rho2 * p.rho2)
        / d2.powi(p.d as i32))
}

/// I.i.d. uniform points on the sphere via normalized Gaussians.
pub fn sample_uniform_sphere(d: usize, n: usize, seed: u64) -> Result<Vec<UnitVector>> {
    if d < 2 {
        return Err(EwcError::BadDimension(d));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| uniform_draw(d, &mut rng)).collect())
}

fn uniform_draw<R: Rng>(d: usize, rng: &mut R) -> UnitVector {
    loop {
        let coords: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        if let Ok(u) = UnitVector::normalize(coords) {
            return u;
        }
    }
}

/// Exact i.i.d. sample from the exit distribution by rejection against the
/// uniform law. The envelope `M = (1 + rho1)/(1 - rho1)^{d-1}` is tight at
/// `x = eta1`; acceptance degrades as `(1 - rho1)^{d-1}`.
pub fn sample_exit(rho1: f64, eta1: &UnitVector, n: usize, seed: u64) -> Result<Vec<UnitVector>> {
    if !(0.0..1.0).contains(&rho1) {
        return Err(EwcError::RhoOutOfRange(rho1));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = exit_draw(rho1, eta1, &mut rng);
        out.push(x);
    }
    Ok(out)
}

fn exit_draw<R: Rng>(rho1: f64, eta1: &UnitVector, rng: &mut R) -> UnitVector {
    let d = eta1.dim() as i32;
    loop {
        let x = uniform_draw(eta1.dim(), rng);
        // accept with prob (f / M f_unif) = ((1 - rho1) / ||x - rho1 eta1||)^d
        let accept = ((1.0 - rho1) / x.distance_to_scaled(rho1, eta1)).powi(d);
        if rng.random::<f64>() < accept {
            return x;
        }
    }
}

/// Independence Metropolis-Hastings chain for the two-pole density,
/// proposing from the exit distribution with pole `rho2 * eta2`; only the
/// exit-likelihood ratio at `eta1` enters the acceptance probability.
pub fn sample_sphere_mcmc(
    p: &SphereParams,
    n: usize,
    cfg: &McmcConfig,
    seed: u64,
) -> Result<Vec<UnitVector>> {
    let chains = cfg.chain_count.max(1);
    let thin = cfg.thin.max(1);
    let per_chain = n.div_ceil(chains);
    let d = p.d as i32;
    let mut out = Vec::with_capacity(per_chain * chains);
    for chain in 0..chains {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(chain as u64));
        let mut state = exit_draw(p.rho2, &p.eta2, &mut rng);
        let mut dist_state = p.eta1.distance_to_scaled(p.rho1, &state);
        let total_steps = cfg.burn_in + per_chain * thin;
        let mut kept = 0usize;
        for step in 0..total_steps {
            let candidate = exit_draw(p.rho2, &p.eta2, &mut rng);
            let dist_candidate = p.eta1.distance_to_scaled(p.rho1, &candidate);
            let ratio = (dist_state / dist_candidate).powi(d);
            if ratio >= 1.0 || rng.random::<f64>() < ratio {
                state = candidate;
                dist_state = dist_candidate;
            }
            if step >= cfg.burn_in && (step - cfg.burn_in) % thin == thin - 1 && kept < per_chain {
                out.push(state.clone());
                kept += 1;
            }
        }
    }
    out.truncate(n);
    Ok(out)
}
