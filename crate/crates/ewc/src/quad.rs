//! Quadrature routines used as independent oracles for the closed forms.
//!
//! For smooth 2*pi-periodic integrands the trapezoidal rule converges
//! spectrally, so full-circle integrals are computed on an equispaced grid
//! whose size is doubled until two successive estimates agree.

use std::f64::consts::PI;

/// Trapezoidal rule over one full period `[-pi, pi)` with `n` nodes.
///
/// Equispaced nodes and equal weights; the endpoint term is absorbed by
/// periodicity.
pub fn periodic_trapezoid<F: Fn(f64) -> f64>(f: &F, n: usize) -> f64 {
    let h = 2.0 * PI / n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        sum += f(-PI + k as f64 * h);
    }
    sum * h
}

/// Full-circle integral, doubling the node count from `n0` until two
/// successive estimates differ by less than `tol` (or the cap is reached).
pub fn periodic_integral<F: Fn(f64) -> f64>(f: &F, n0: usize, tol: f64) -> f64 {
    let mut n = n0.max(16);
    let mut prev = periodic_trapezoid(f, n);
    loop {
        n *= 2;
        let cur = periodic_trapezoid(f, n);
        if (cur - prev).abs() < tol || n >= 1 << 22 {
            return cur;
        }
        prev = cur;
    }
}

/// Adaptive Simpson integration on `[a, b]`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fb, fm, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1)
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
///
/// Nodes by Newton iteration from the Chebyshev initial guess; accurate to
/// machine precision for the modest orders used here.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_deriv(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out
}

fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_is_spectral_for_periodic_integrands() {
        // int cos^2 = pi
        let v = periodic_trapezoid(&|t: f64| t.cos().powi(2), 64);
        assert!((v - PI).abs() < 1e-13);
    }

    #[test]
    fn adaptive_simpson_polynomial() {
        let v = adaptive_simpson(&|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12);
        assert!((v - 0.0).abs() < 1e-10);
    }

    #[test]
    fn gauss_legendre_integrates_high_degree() {
        let rule = gauss_legendre(16);
        // int_{-1}^1 x^20 dx = 2/21
        let v: f64 = rule.iter().map(|&(x, w)| w * x.powi(20)).sum();
        assert!((v - 2.0 / 21.0).abs() < 1e-12);
        let total: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-13);
    }
}
