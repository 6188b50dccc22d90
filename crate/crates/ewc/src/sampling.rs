//! Random variate generation: exact samplers (inverse CDF, rejection,
//! mixture) and an independence Metropolis-Hastings chain built on the
//! posterior characterization of the four-parameter family.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::angle::CircAngle;
use crate::density::{normalizing_constant, wc_kernel, TWO_PI};
use crate::error::{EwcError, Result};
use crate::interval::cdf;
use crate::params::{EwcParams, WcParams};
use crate::shape::mixture_decomposition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMethod {
    WcExact,
    Rejection,
    InverseCdf,
    Mcmc,
    Mixture,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct SampleDiagnostics {
    /// Fraction of proposals accepted (rejection and MCMC methods).
    pub acceptance_rate: Option<f64>,
    /// Effective sample size estimate from the autocorrelation of `cos`.
    pub effective_sample_size: Option<f64>,
}

/// A batch of draws plus the information needed to reproduce it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleBatch {
    pub angles: Vec<CircAngle>,
    pub seed: u64,
    pub method: SampleMethod,
    pub diagnostics: SampleDiagnostics,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct McmcConfig {
    pub burn_in: usize,
    pub thin: usize,
    pub chain_count: usize,
}

impl Default for McmcConfig {
    fn default() -> Self {
        // the proposal is the heavy-tailed prior, so mixing is fast
        McmcConfig {
            burn_in: 1000,
            thin: 10,
            chain_count: 1,
        }
    }
}

/// One exact inverse-CDF draw from the wrapped Cauchy.
pub fn wc_draw<R: Rng>(rng: &mut R, p: &WcParams) -> f64 {
    let u: f64 = rng.random();
    let rho = p.rho();
    p.mu.radians() + 2.0 * (((1.0 - rho) / (1.0 + rho)) * (PI * (u - 0.5)).tan()).atan()
}

/// Exact i.i.d. wrapped Cauchy sample by CDF inversion.
pub fn sample_wc(p: &WcParams, n: usize, seed: u64) -> SampleBatch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angles = (0..n)
        .map(|_| CircAngle::new(wc_draw(&mut rng, p)))
        .collect();
    SampleBatch {
        angles,
        seed,
        method: SampleMethod::WcExact,
        diagnostics: SampleDiagnostics::default(),
    }
}

/// The rejection envelope constant for a wrapped Cauchy proposal centred on
/// the `(mu_p, rho_p)` factor: `M = 2 pi C / ((1 - rho_p^2)(1 - rho_o)^2)`,
/// tight where the other factor's kernel is smallest.
fn rejection_bound(c: f64, rho_proposal: f64, rho_other: f64) -> f64 {
    TWO_PI * c / ((1.0 - rho_proposal * rho_proposal) * (1.0 - rho_other) * (1.0 - rho_other))
}

/// Exact i.i.d. sample by rejection from a wrapped Cauchy proposal.
///
/// The proposal uses whichever parameter label yields the smaller envelope
/// constant; the labels are exchangeable.
pub fn sample_ewc_rejection(p: &EwcParams, n: usize, seed: u64) -> SampleBatch {
    let c = normalizing_constant(p);
    let m_with_1 = rejection_bound(c, p.rho1(), p.rho2());
    let m_with_2 = rejection_bound(c, p.rho2(), p.rho1());
    let p = if m_with_2 < m_with_1 { p.swapped() } else { *p };

    let proposal = WcParams::new(p.mu1, p.rho1()).expect("valid rho");
    let other_mu = p.mu2.radians();
    let other_rho = p.rho2();
    let floor = (1.0 - other_rho) * (1.0 - other_rho);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut angles = Vec::with_capacity(n);
    let mut attempts: u64 = 0;
    while angles.len() < n {
        attempts += 1;
        let theta = wc_draw(&mut rng, &proposal);
        let accept_prob = floor / wc_kernel(theta, other_mu, other_rho);
        if rng.random::<f64>() < accept_prob {
            angles.push(CircAngle::new(theta));
        }
    }
    SampleBatch {
        angles,
        seed,
        method: SampleMethod::Rejection,
        diagnostics: SampleDiagnostics {
            acceptance_rate: Some(n as f64 / attempts as f64),
            effective_sample_size: None,
        },
    }
}

/// Exact i.i.d. sample by numerical inversion of the closed-form CDF.
pub fn sample_ewc_invcdf(p: &EwcParams, n: usize, seed: u64, tol: f64) -> Result<SampleBatch> {
    let tol = tol.max(1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut angles = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.random();
        angles.push(CircAngle::new(invert_cdf(p, u, tol)?));
    }
    Ok(SampleBatch {
        angles,
        seed,
        method: SampleMethod::InverseCdf,
        diagnostics: SampleDiagnostics::default(),
    })
}

fn invert_cdf(p: &EwcParams, u: f64, tol: f64) -> Result<f64> {
    let mut lo = -PI;
    let mut hi = PI;
    // F(-pi) = 0, F(pi-) = 1 bracket every u in (0, 1)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f = if mid >= PI {
            1.0
        } else {
            cdf(CircAngle::new(mid), p)
        };
        if (f - u).abs() < tol || hi - lo < 1e-15 {
            return Ok(mid);
        }
        if f < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(EwcError::QuantileNoConvergence(200))
}

/// Independence Metropolis-Hastings chain whose stationary law is the
/// four-parameter density: the target is the posterior of a wrapped Cauchy
/// location under a wrapped Cauchy prior, so proposing from the prior
/// leaves only the likelihood ratio in the acceptance probability.
pub fn sample_ewc_mcmc(p: &EwcParams, n: usize, cfg: &McmcConfig, seed: u64) -> SampleBatch {
    let chains = cfg.chain_count.max(1);
    let thin = cfg.thin.max(1);
    let per_chain = n.div_ceil(chains);
    let prior = WcParams::new(p.mu2, p.rho2()).expect("valid rho");
    let obs = p.mu1.radians();
    let rho1 = p.rho1();

    let mut angles = Vec::with_capacity(per_chain * chains);
    let mut accepted: u64 = 0;
    let mut proposed: u64 = 0;
    for chain in 0..chains {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(chain as u64));
        let mut state = p.mu2.radians();
        let mut kernel_state = wc_kernel(obs, state, rho1);
        let total_steps = cfg.burn_in + per_chain * thin;
        let mut kept = 0usize;
        for step in 0..total_steps {
            let candidate = wc_draw(&mut rng, &prior);
            let kernel_candidate = wc_kernel(obs, candidate, rho1);
            // likelihood ratio of the wrapped Cauchy observation
            let ratio = kernel_state / kernel_candidate;
            proposed += 1;
            if ratio >= 1.0 || rng.random::<f64>() < ratio {
                state = candidate;
                kernel_state = kernel_candidate;
                accepted += 1;
            }
            if step >= cfg.burn_in && (step - cfg.burn_in) % thin == thin - 1 && kept < per_chain {
                angles.push(CircAngle::new(state));
                kept += 1;
            }
        }
    }
    angles.truncate(n);
    let ess = crate::stats::effective_sample_size(
        &angles.iter().map(|a| a.radians().cos()).collect::<Vec<_>>(),
    );
    SampleBatch {
        angles,
        seed,
        method: SampleMethod::Mcmc,
        diagnostics: SampleDiagnostics {
            acceptance_rate: Some(accepted as f64 / proposed as f64),
            effective_sample_size: Some(ess),
        },
    }
}

/// Exact i.i.d. sample from the symmetric submodel with `rho1 <= 0`, via
/// its two-component wrapped Cauchy mixture representation.
pub fn sample_symmetric_mixture(
    mu: CircAngle,
    rho1: f64,
    rho2: f64,
    n: usize,
    seed: u64,
) -> Result<SampleBatch> {
    let (weight, wc1, wc2) = mixture_decomposition(mu, rho1, rho2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angles = (0..n)
        .map(|_| {
            let component = if rng.random::<f64>() < weight { &wc1 } else { &wc2 };
            CircAngle::new(wc_draw(&mut rng, component))
        })
        .collect();
    Ok(SampleBatch {
        angles,
        seed,
        method: SampleMethod::Mixture,
        diagnostics: SampleDiagnostics::default(),
    })
}
