//! Maximum-likelihood fitting. The wrapped Cauchy submodel gets a
//! moment-style initializer; the full four-parameter family is fitted by
//! Nelder-Mead over an unconstrained reparametrization with several starts.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::CircAngle;
use crate::density::log_density;
use crate::error::{EwcError, Result};
use crate::params::{EwcParams, WcParams};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Dataset {
    pub angles: Vec<CircAngle>,
}

impl Dataset {
    pub fn new(angles: Vec<CircAngle>) -> Result<Self> {
        if angles.len() < 5 {
            return Err(EwcError::TooFewObservations {
                need: 5,
                got: angles.len(),
            });
        }
        Ok(Dataset { angles })
    }

    pub fn from_radians(values: &[f64]) -> Result<Self> {
        Dataset::new(values.iter().map(|&v| CircAngle::new(v)).collect())
    }

    pub fn from_degrees(values: &[f64]) -> Result<Self> {
        Dataset::new(
            values
                .iter()
                .map(|&v| CircAngle::new(v.to_radians()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResult {
    pub params: EwcParams,
    pub loglik: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Asymptotic standard errors of (mu1, mu2, rho1, rho2) from the
    /// observed information, when it is positive definite.
    pub stderr: Option<[f64; 4]>,
    pub init: EwcParams,
}

pub fn loglik(data: &Dataset, p: &EwcParams) -> f64 {
    data.angles.iter().map(|&t| log_density(t, p)).sum()
}

/// Moment estimator for the wrapped Cauchy: the mean resultant vector is
/// `rho e^{i mu}` exactly, so its empirical version is plugged in.
pub fn fit_wc(data: &Dataset) -> Result<WcParams> {
    let m = crate::stats::circular_mean(&data.angles);
    let rho = m.norm().min(1.0 - 1e-9);
    if !rho.is_finite() {
        return Err(EwcError::DegenerateSample);
    }
    let mu = if rho < 1e-12 { 0.0 } else { m.arg() };
    WcParams::new(mu, rho)
}

/// Keeps rho strictly inside [0, 1) under the logistic reparametrization.
const RHO_CAP: f64 = 1.0 - 1e-6;

fn to_unconstrained(p: &EwcParams) -> [f64; 4] {
    [
        p.mu1.radians(),
        p.mu2.radians(),
        logit(p.rho1()),
        logit(p.rho2()),
    ]
}

fn from_unconstrained(x: &[f64; 4]) -> EwcParams {
    EwcParams::new(x[0], x[1], sigmoid(x[2]), sigmoid(x[3]))
        .expect("sigmoid keeps rho inside the cap")
}

fn sigmoid(t: f64) -> f64 {
    RHO_CAP / (1.0 + (-t).exp())
}

fn logit(rho: f64) -> f64 {
    let r = (rho / RHO_CAP).clamp(1e-9, 1.0 - 1e-9);
    (r / (1.0 - r)).ln()
}

struct NelderMead {
    max_iter: usize,
    tol: f64,
}

impl NelderMead {
    /// Minimizes `f` from `x0`; returns (argmin, min, iterations).
    fn run<F: Fn(&[f64; 4]) -> f64>(&self, f: &F, x0: [f64; 4]) -> ([f64; 4], f64, usize) {
        const N: usize = 4;
        let mut simplex: Vec<([f64; 4], f64)> = Vec::with_capacity(N + 1);
        simplex.push((x0, f(&x0)));
        for i in 0..N {
            let mut v = x0;
            v[i] += if v[i].abs() > 1.0 { 0.1 * v[i].abs() } else { 0.1 };
            simplex.push((v, f(&v)));
        }
        let mut iter = 0;
        while iter < self.max_iter {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if (simplex[N].1 - simplex[0].1).abs()
                < self.tol * (1.0 + simplex[0].1.abs())
            {
                break;
            }
            iter += 1;
            let mut centroid = [0.0; N];
            for (v, _) in simplex.iter().take(N) {
                for k in 0..N {
                    centroid[k] += v[k] / N as f64;
                }
            }
            let worst = simplex[N];
            let reflect = combine(&centroid, &worst.0, -1.0);
            let fr = f(&reflect);
            if fr < simplex[0].1 {
                let expand = combine(&centroid, &worst.0, -2.0);
                let fe = f(&expand);
                simplex[N] = if fe < fr { (expand, fe) } else { (reflect, fr) };
            } else if fr < simplex[N - 1].1 {
                simplex[N] = (reflect, fr);
            } else {
                let contract = if fr < worst.1 {
                    combine(&centroid, &reflect, 0.5)
                } else {
                    combine(&centroid, &worst.0, 0.5)
                };
                let fc = f(&contract);
                if fc < worst.1.min(fr) {
                    simplex[N] = (contract, fc);
                } else {
                    let best = simplex[0].0;
                    for (v, fv) in simplex.iter_mut().skip(1) {
                        for k in 0..N {
                            v[k] = best[k] + 0.5 * (v[k] - best[k]);
                        }
                        *fv = f(v);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        (simplex[0].0, simplex[0].1, iter)
    }
}

fn combine(centroid: &[f64; 4], v: &[f64; 4], t: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    for k in 0..4 {
        out[k] = centroid[k] + t * (v[k] - centroid[k]);
    }
    out
}

/// Maximum-likelihood fit of the four-parameter family. Runs Nelder-Mead
/// from several starting points, including the wrapped Cauchy fit and its
/// label swap, and keeps the best optimum. An explicit `init` is tried
/// first and the reported likelihood never falls below it.
pub fn fit_ewc(data: &Dataset, init: Option<EwcParams>) -> Result<FitResult> {
    let wc = fit_wc(data)?;
    let mu = wc.mu.radians();
    let rho = wc.rho().clamp(0.05, 0.9);
    let mut starts = Vec::new();
    starts.extend(init);
    starts.extend([
        EwcParams::new(mu, mu, rho, 0.05)?,
        EwcParams::new(mu, mu, 0.05, rho)?,
        EwcParams::new(mu, mu, rho.sqrt(), rho.sqrt())?,
    ]);
    // second-moment direction suggests a second pole location
    let m2 = crate::stats::circular_moment(&data.angles, 2);
    let mu2_guess = if m2.norm() > 1e-6 {
        0.5 * m2.arg()
    } else {
        mu + 1.0
    };
    for &(r1, r2) in &[(rho, 0.3), (0.3, rho)] {
        starts.push(EwcParams::new(mu, mu2_guess, r1, r2)?);
        starts.push(EwcParams::new(mu2_guess, mu, r1, r2)?);
    }
    starts.push(EwcParams::new(mu, mu + std::f64::consts::PI, rho, 0.2)?);

    let n = data.len() as f64;
    let objective = |x: &[f64; 4]| -loglik(data, &from_unconstrained(x)) / n;
    let nm = NelderMead {
        max_iter: 2000,
        tol: 1e-12,
    };
    let init = starts[0];
    let results: Vec<([f64; 4], f64, usize)> = starts
        .par_iter()
        .map(|start| nm.run(&objective, to_unconstrained(start)))
        .collect();
    let (x, fx, iterations) = results
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one start");
    let params = from_unconstrained(&x).canonical();
    let converged = gradient_norm(&objective, &x) < 1e-5;
    Ok(FitResult {
        loglik: -fx * n,
        stderr: observed_information_stderr(data, &params),
        params,
        converged,
        iterations,
        init,
    })
}

fn gradient_norm<F: Fn(&[f64; 4]) -> f64>(f: &F, x: &[f64; 4]) -> f64 {
    let h = 1e-5;
    let mut norm2 = 0.0;
    for k in 0..4 {
        let mut xp = *x;
        let mut xm = *x;
        xp[k] += h;
        xm[k] -= h;
        let g = (f(&xp) - f(&xm)) / (2.0 * h);
        norm2 += g * g;
    }
    norm2.sqrt()
}

/// Standard errors from the inverse of the negative log-likelihood Hessian
/// in the natural (mu1, mu2, rho1, rho2) coordinates, by central
/// differences. Returns None if the information matrix is not positive
/// definite, as happens on the boundary or under label degeneracy.
fn observed_information_stderr(data: &Dataset, p: &EwcParams) -> Option<[f64; 4]> {
    let x0 = [p.mu1.radians(), p.mu2.radians(), p.rho1(), p.rho2()];
    let f = |x: &[f64; 4]| -> Option<f64> {
        let q = EwcParams::new(x[0], x[1], x[2], x[3]).ok()?;
        Some(-loglik(data, &q))
    };
    let h = 1e-4;
    let mut hess = nalgebra::Matrix4::<f64>::zeros();
    for i in 0..4 {
        for j in i..4 {
            let mut xpp = x0;
            let mut xpm = x0;
            let mut xmp = x0;
            let mut xmm = x0;
            xpp[i] += h;
            xpp[j] += h;
            xpm[i] += h;
            xpm[j] -= h;
            xmp[i] -= h;
            xmp[j] += h;
            xmm[i] -= h;
            xmm[j] -= h;
            let v = (f(&xpp)? - f(&xpm)? - f(&xmp)? + f(&xmm)?) / (4.0 * h * h);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    let chol = nalgebra::Cholesky::new(hess)?;
    let cov = chol.inverse();
    let mut se = [0.0; 4];
    for k in 0..4 {
        let v = cov[(k, k)];
        if !(v.is_finite() && v > 0.0) {
            return None;
        }
        se[k] = v.sqrt();
    }
    Some(se)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{sample_ewc_rejection, sample_wc};
    use std::f64::consts::PI;

    #[test]
    fn dataset_validation() {
        assert!(Dataset::from_radians(&[0.1, 0.2]).is_err());
        let d = Dataset::from_degrees(&[0.0, 90.0, 180.0, 270.0, 45.0]).unwrap();
        assert!((d.angles[1].radians() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn wc_moment_estimator_recovers_parameters() {
        let truth = WcParams::new(0.8, 0.6).unwrap();
        let batch = sample_wc(&truth, 200_000, 11);
        let data = Dataset::new(batch.angles).unwrap();
        let est = fit_wc(&data).unwrap();
        assert!((est.mu.radians() - 0.8).abs() < 0.02, "mu = {:?}", est.mu);
        assert!((est.rho() - 0.6).abs() < 0.01, "rho = {}", est.rho());
    }

    #[test]
    fn loglik_is_maximal_near_the_truth() {
        let truth = EwcParams::new(0.5, -1.2, 0.7, 0.4).unwrap();
        let batch = sample_ewc_rejection(&truth, 50_000, 13);
        let data = Dataset::new(batch.angles).unwrap();
        let at_truth = loglik(&data, &truth);
        let off = EwcParams::new(0.5 + 0.3, -1.2, 0.7, 0.4).unwrap();
        assert!(at_truth > loglik(&data, &off));
    }

    #[test]
    fn full_fit_recovers_a_well_separated_model() {
        let truth = EwcParams::new(0.5, -1.2, 0.75, 0.45).unwrap();
        let batch = sample_ewc_rejection(&truth, 30_000, 17);
        let data = Dataset::new(batch.angles).unwrap();
        let fit = fit_ewc(&data, None).unwrap();
        let t = truth.canonical();
        let p = fit.params;
        assert!(
            p.mu1.distance(t.mu1) < 0.1
                && p.mu2.distance(t.mu2) < 0.15
                && (p.rho1() - t.rho1()).abs() < 0.05
                && (p.rho2() - t.rho2()).abs() < 0.08,
            "fit = {p:?}"
        );
        assert!(fit.loglik >= loglik(&data, &t) - 1e-6);
    }

    #[test]
    fn fit_reports_errors_when_information_is_regular() {
        let truth = EwcParams::new(0.3, 2.0, 0.7, 0.5).unwrap();
        let batch = sample_ewc_rejection(&truth, 20_000, 23);
        let data = Dataset::new(batch.angles).unwrap();
        let fit = fit_ewc(&data, None).unwrap();
        if let Some(se) = fit.stderr {
            for s in se {
                assert!(s > 0.0 && s < 0.5, "se = {se:?}");
            }
        }
        assert!(fit.converged);
    }
}
