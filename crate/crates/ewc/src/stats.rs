//! Small statistical helpers shared by the test oracles and the `verify`
//! sweeps: empirical circular moments, Kolmogorov-Smirnov statistics, a
//! chi-square goodness-of-fit count, and an autocorrelation-based effective
//! sample size.

use num_complex::Complex64;

use crate::angle::CircAngle;

/// Empirical mean of `e^{i theta}`.
pub fn circular_mean(angles: &[CircAngle]) -> Complex64 {
    circular_moment(angles, 1)
}

/// Empirical mean of `e^{i n theta}`.
pub fn circular_moment(angles: &[CircAngle], n: u32) -> Complex64 {
    let nf = n as f64;
    let sum: Complex64 = angles
        .iter()
        .map(|a| Complex64::from_polar(1.0, nf * a.radians()))
        .sum();
    sum / angles.len() as f64
}

/// One-sample Kolmogorov-Smirnov statistic. `sorted` must be ascending.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// Two-sample Kolmogorov-Smirnov statistic. Both inputs must be ascending.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut i = 0;
    let mut j = 0;
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        // advance past ties on both sides before comparing the ECDFs
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Critical value for a two-sample KS test at significance `alpha` in
/// {0.05, 0.01}.
pub fn ks_two_sample_critical(n: usize, m: usize, alpha: f64) -> f64 {
    let c = if alpha <= 0.01 { 1.628 } else { 1.358 };
    c * (((n + m) as f64) / ((n * m) as f64)).sqrt()
}

/// One-sample KS critical value.
pub fn ks_critical(n: usize, alpha: f64) -> f64 {
    let c = if alpha <= 0.01 { 1.628 } else { 1.358 };
    c / (n as f64).sqrt()
}

/// Chi-square statistic for counts against equal expected bin mass.
pub fn chi_square_uniform_bins(counts: &[usize], total: usize) -> f64 {
    let expected = total as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum()
}

/// Effective sample size from the initial-positive-sequence estimate of the
/// integrated autocorrelation time.
pub fn effective_sample_size(series: &[f64]) -> f64 {
    let n = series.len();
    if n < 10 {
        return n as f64;
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let var = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
    if var == 0.0 {
        return n as f64;
    }
    let mut tau = 1.0;
    for lag in 1..n / 2 {
        let mut acc = 0.0;
        for i in 0..n - lag {
            acc += (series[i] - mean) * (series[i + lag] - mean);
        }
        let r = acc / ((n - lag) as f64 * var);
        if r <= 0.0 {
            break;
        }
        tau += 2.0 * r;
    }
    n as f64 / tau
}

/// L1 distance between a histogram of `angles` (equal-width bins over the
/// circle) and a density, with the density integrated per bin by midpoint.
pub fn histogram_l1<F: Fn(f64) -> f64>(angles: &[CircAngle], bins: usize, density: F) -> f64 {
    use std::f64::consts::PI;
    let width = 2.0 * PI / bins as f64;
    let mut counts = vec![0usize; bins];
    for a in angles {
        let idx = (((a.radians() + PI) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let n = angles.len() as f64;
    let mut l1 = 0.0;
    for (k, &c) in counts.iter().enumerate() {
        let mid = -PI + (k as f64 + 0.5) * width;
        let p_hat = c as f64 / n;
        let p_true = density(mid) * width;
        l1 += (p_hat - p_true).abs();
    }
    l1
}
