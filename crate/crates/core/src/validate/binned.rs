//! Binned comparisons: histogram against a density, and mean sign against
//! the skewness coefficient.

use super::TestReport;
use crate::beta::BetaFunction;
use crate::error::{domain, Result};

/// Bins with fewer expected counts are merged with their neighbours.
pub const MIN_BIN_EXPECTED: f64 = 20.0;
/// Minimum number of pairs per bin in the sign check.
pub const MIN_SIGN_BIN: usize = 500;

const HIST_Z_MAX: f64 = 4.0;
const SIGN_Z_MAX: f64 = 3.5;
const SIMPSON_PANELS: usize = 16;

/// Composite Simpson on `[a, b]` with the ends pulled in slightly, so that a
/// density jumping at an end contributes its one-sided limit.
fn simpson(f: &impl Fn(f64) -> Result<f64>, a: f64, b: f64) -> Result<f64> {
    let eta = 1e-9 * (b - a);
    let (a, b) = (a + eta, b - eta);
    let h = (b - a) / SIMPSON_PANELS as f64;
    let mut s = f(a)? + f(b)?;
    for k in 1..SIMPSON_PANELS {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h)?;
    }
    Ok(s * h / 3.0)
}

/// Mass of `density` on `[a, b]`, split at 0 where the densities of the
/// process may jump.
fn bin_mass(f: &impl Fn(f64) -> Result<f64>, a: f64, b: f64) -> Result<f64> {
    if a < 0.0 && b > 0.0 {
        Ok(simpson(f, a, 0.0)? + simpson(f, 0.0, b)?)
    } else {
        simpson(f, a, b)
    }
}

/// Groups consecutive bins so every group reaches `min` by `weight`; a short
/// final group is merged into its predecessor. Returns the group ends.
fn merge_groups(weights: &[f64], min: f64) -> Vec<usize> {
    let mut ends = Vec::new();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if acc >= min {
            ends.push(i + 1);
            acc = 0.0;
        }
    }
    if acc > 0.0 || ends.is_empty() {
        match ends.last_mut() {
            Some(last) if acc < min => *last = weights.len(),
            _ => ends.push(weights.len()),
        }
    }
    ends
}

/// Histogram of `samples` on `n_bins` equal bins of `range` compared with the
/// expected counts under `density`. Statistic: the largest absolute bin
/// z-score `(observed - expected)/√expected`; passes when at most 4.
pub fn density_histogram_check(
    samples: &[f64],
    density: impl Fn(f64) -> Result<f64>,
    n_bins: usize,
    range: (f64, f64),
) -> Result<TestReport> {
    let (lo, hi) = range;
    if n_bins == 0 || !(hi > lo) || samples.is_empty() {
        return domain("histogram check needs bins, a non-empty range and samples");
    }
    let n = samples.len() as f64;
    let width = (hi - lo) / n_bins as f64;
    let mut observed = vec![0.0; n_bins];
    for &x in samples {
        if x >= lo && x < hi {
            let k = (((x - lo) / width) as usize).min(n_bins - 1);
            observed[k] += 1.0;
        }
    }
    let expected = (0..n_bins)
        .map(|k| {
            let a = lo + k as f64 * width;
            Ok(n * bin_mass(&density, a, a + width)?)
        })
        .collect::<Result<Vec<f64>>>()?;

    let mut z_max: f64 = 0.0;
    let mut start = 0;
    for end in merge_groups(&expected, MIN_BIN_EXPECTED) {
        let e: f64 = expected[start..end].iter().sum();
        let o: f64 = observed[start..end].iter().sum();
        let z = if e > 0.0 {
            (o - e) / e.sqrt()
        } else if o > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        z_max = z_max.max(z.abs());
        start = end;
    }
    Ok(TestReport::residual(
        "density_histogram",
        z_max,
        z_max,
        HIST_Z_MAX,
        samples.len() as u64,
    ))
}

/// Mean of the sign against the mean of `β(g)` within bins of `g`.
///
/// `pairs` holds `(g, sign)`. Bins are equal-width on the observed range of
/// `g` and merged until each holds at least [`MIN_SIGN_BIN`] pairs. Per-bin
/// z-scores use the binomial standard error `√((1 - β̄²)/n)`; passes when all
/// are at most 3.5.
pub fn conditional_sign_check(
    pairs: &[(f64, f64)],
    beta: &BetaFunction,
    n_bins: usize,
) -> Result<TestReport> {
    if pairs.is_empty() || n_bins == 0 {
        return domain("conditional sign check needs pairs and at least one bin");
    }
    let (g_lo, g_hi) = pairs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &(g, _)| (a.min(g), b.max(g)));
    let width = ((g_hi - g_lo) / n_bins as f64).max(f64::MIN_POSITIVE);
    let mut count = vec![0.0; n_bins];
    let mut sign_sum = vec![0.0; n_bins];
    let mut beta_sum = vec![0.0; n_bins];
    for &(g, s) in pairs {
        let k = (((g - g_lo) / width) as usize).min(n_bins - 1);
        count[k] += 1.0;
        sign_sum[k] += s;
        beta_sum[k] += beta.eval(g)?;
    }
    if pairs.len() < MIN_SIGN_BIN {
        return domain(format!(
            "conditional sign check needs at least {MIN_SIGN_BIN} pairs, got {}",
            pairs.len()
        ));
    }
    let mut z_max: f64 = 0.0;
    let mut start = 0;
    for end in merge_groups(&count, MIN_SIGN_BIN as f64) {
        let n: f64 = count[start..end].iter().sum();
        let mean_sign = sign_sum[start..end].iter().sum::<f64>() / n;
        let mean_beta = beta_sum[start..end].iter().sum::<f64>() / n;
        let se = ((1.0 - mean_beta * mean_beta).max(0.0) / n).sqrt();
        let diff = mean_sign - mean_beta;
        let z = if se > 0.0 {
            diff / se
        } else if diff.abs() < 1e-12 {
            0.0
        } else {
            f64::INFINITY
        };
        z_max = z_max.max(z.abs());
        start = end;
    }
    Ok(TestReport::residual(
        "conditional_sign",
        z_max,
        z_max,
        SIGN_Z_MAX,
        pairs.len() as u64,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::gaussian_kernel;
    use crate::laws::{arcsin_sample, rademacher_sample};
    use crate::rng::RngStream;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn merging_reaches_minimum() {
        assert_eq!(merge_groups(&[5.0, 30.0, 10.0, 10.0, 3.0], 20.0), vec![2, 5]);
        assert_eq!(merge_groups(&[1.0, 1.0], 20.0), vec![2]);
        assert_eq!(merge_groups(&[25.0, 25.0], 20.0), vec![1, 2]);
    }

    #[test]
    fn simpson_handles_jump_at_zero() {
        let f = |x: f64| Ok(if x > 0.0 { 2.0 } else if x < 0.0 { 1.0 } else { 1.5 });
        assert!((bin_mass(&f, -1.0, 1.0).unwrap() - 3.0).abs() < 1e-8);
        assert!((bin_mass(&f, 0.0, 1.0).unwrap() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn normal_histogram_self_test() {
        let mut rng = RngStream::new(31, 0);
        let x: Vec<f64> = (0..100_000).map(|_| rng.sample(StandardNormal)).collect();
        let r = density_histogram_check(&x, |y| gaussian_kernel(1.0, 0.0, y), 40, (-4.0, 4.0)).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn concentrated_sample_fails() {
        let x = vec![0.05; 10_000];
        let r = density_histogram_check(&x, |y| gaussian_kernel(1.0, 0.0, y), 40, (-4.0, 4.0)).unwrap();
        assert!(!r.passed);
    }

    fn sign_pairs(beta: &BetaFunction, fair: bool, seed: u64) -> Vec<(f64, f64)> {
        let mut rng = RngStream::new(seed, 0);
        (0..100_000)
            .map(|_| {
                let g = arcsin_sample(&mut rng);
                let p = if fair { 0.5 } else { 0.5 * (1.0 + beta.eval(g).unwrap()) };
                (g, f64::from(rademacher_sample(p, &mut rng).unwrap()))
            })
            .collect()
    }

    #[test]
    fn sign_check_cases() {
        let one = BetaFunction::constant(1.0).unwrap();
        let r = conditional_sign_check(&sign_pairs(&one, false, 1), &one, 20).unwrap();
        assert!(r.passed && r.statistic == 0.0);

        let step = BetaFunction::step(vec![0.0, 0.5], vec![0.8, -0.6]).unwrap();
        assert!(conditional_sign_check(&sign_pairs(&step, false, 2), &step, 20).unwrap().passed);

        let b = BetaFunction::constant(0.8).unwrap();
        assert!(!conditional_sign_check(&sign_pairs(&b, true, 3), &b, 20).unwrap().passed);
        assert!(conditional_sign_check(&[], &b, 20).is_err());
    }
}
