//! Kolmogorov–Smirnov tests with asymptotic p-values.

use std::f64::consts::PI;

use super::{TestReport, P_THRESHOLD};
use crate::error::{domain, Result};

/// Smallest sample accepted by the one-sample test.
pub const KS_MIN_N: usize = 100;

/// `P(K > λ)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    if lambda < 1.18 {
        // theta-function form, converges fast for small λ
        let c = -PI * PI / (8.0 * lambda * lambda);
        let cdf: f64 = (1..=20)
            .map(|k| {
                let j = (2 * k - 1) as f64;
                (c * j * j).exp()
            })
            .sum::<f64>()
            * (2.0 * PI).sqrt()
            / lambda;
        (1.0 - cdf).clamp(0.0, 1.0)
    } else {
        let s: f64 = (1..=100)
            .map(|k| {
                let k = k as f64;
                let sign = if k as u64 % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * k * k * lambda * lambda).exp()
            })
            .sum();
        (2.0 * s).clamp(0.0, 1.0)
    }
}

fn sorted(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.iter().any(|x| x.is_nan()) {
        return domain("sample contains NaN");
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// One-sample test of `samples` against a continuous `cdf`.
pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<TestReport> {
    let n = samples.len();
    if n < KS_MIN_N {
        return domain(format!("KS test needs at least {KS_MIN_N} samples, got {n}"));
    }
    let x = sorted(samples)?;
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        let f = cdf(xi);
        d = d.max(f - i as f64 / nf).max((i + 1) as f64 / nf - f);
    }
    let p = kolmogorov_survival(nf.sqrt() * d);
    Ok(TestReport::p_value("ks_one_sample", d, p, P_THRESHOLD, n as u64))
}

/// Two-sample test; the report's `n` is the total sample size.
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> Result<TestReport> {
    if a.is_empty() || b.is_empty() {
        return domain("two-sample KS needs non-empty samples");
    }
    let (x, y) = (sorted(a)?, sorted(b)?);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let p = kolmogorov_survival((n * m / (n + m)).sqrt() * d);
    Ok(TestReport::p_value("two_sample_ks", d, p, P_THRESHOLD, (x.len() + y.len()) as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::arcsin_cdf;
    use crate::rng::RngStream;
    use approx::assert_relative_eq;
    use rand::Rng;

    #[test]
    fn kolmogorov_known_values() {
        // classical critical values
        assert_relative_eq!(kolmogorov_survival(1.358_1), 0.05, epsilon = 1e-4);
        assert_relative_eq!(kolmogorov_survival(1.627_6), 0.01, epsilon = 1e-4);
        assert_relative_eq!(kolmogorov_survival(1.949_6), 0.001, epsilon = 1e-5);
        // both branches agree at the switch
        let a = kolmogorov_survival(1.18 - 1e-12);
        let b = kolmogorov_survival(1.18);
        assert_relative_eq!(a, b, epsilon = 1e-12);
        assert_eq!(kolmogorov_survival(0.0), 1.0);
    }

    #[test]
    fn uniform_self_test_passes() {
        let mut rng = RngStream::new(21, 0);
        let u: Vec<f64> = (0..100_000).map(|_| rng.random()).collect();
        assert!(ks_one_sample(&u, |x| x.clamp(0.0, 1.0)).unwrap().passed);
    }

    #[test]
    fn degenerate_and_distinguishable_samples() {
        let c = vec![0.5; 1000];
        let r = ks_one_sample(&c, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(r.statistic >= 0.5 && r.p_or_residual < 1e-100);

        let mut rng = RngStream::new(22, 0);
        let u: Vec<f64> = (0..100_000).map(|_| rng.random()).collect();
        let r = ks_one_sample(&u, |x| arcsin_cdf(x.clamp(0.0, 1.0)).unwrap()).unwrap();
        assert!(r.p_or_residual < 1e-6);
        // sup |u - (2/π) asin √u| is attained where the densities cross
        let crit = (0..=10_000)
            .map(|k| {
                let u = k as f64 / 1e4;
                (u - arcsin_cdf(u).unwrap()).abs()
            })
            .fold(0.0, f64::max);
        assert!((r.statistic - crit).abs() < 0.01, "{} vs {crit}", r.statistic);
        assert!(ks_one_sample(&u[..50], |x| x).is_err());
    }

    #[test]
    fn two_sample_cases() {
        let a: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        let r = two_sample_ks(&a, &a).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_or_residual, 1.0);

        let ray = |seed| {
            let mut rng = RngStream::new(seed, 0);
            (0..100_000).map(|_| crate::laws::rayleigh_sample(&mut rng)).collect::<Vec<_>>()
        };
        assert!(two_sample_ks(&ray(1), &ray(2)).unwrap().passed);
        let mut rng = RngStream::new(3, 0);
        let hn: Vec<f64> = (0..100_000)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal).abs())
            .collect();
        let r = two_sample_ks(&ray(1), &hn).unwrap();
        assert!(r.p_or_residual < 1e-6);
    }
}
