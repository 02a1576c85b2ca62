//! Closed-form endpoint laws and their exact samplers.
//!
//! For the process started at zero, the triple (last zero `G_t`, local time
//! `L_t`, position `B_t`) decomposes into independent pieces:
//! `G_t = t·A` with `A` arcsine, `L_t = √G_t · ℓ` with `ℓ` Rayleigh, and
//! `B_t = Y · √(t - G_t) · M` with `M` Rayleigh and a sign `Y` that is `+1`
//! with probability `(1 + β(G_t))/2`. All samplers are inverse-CDF transforms
//! of uniforms, so sharing uniforms couples them exactly.

use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;
use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::erf::{erf, erfc};

use crate::beta::BetaFunction;
use crate::error::{domain, Result};
use crate::parallel::map_indexed;
use crate::rng::RngStream;
use crate::quadrature::{cut_points, integrate, QuadratureConfig};

const TRIPLE_CHUNK: u64 = 10_000;
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Mean of the Rayleigh law, `√(π/2)`.
pub const RAYLEIGH_MEAN: f64 = 1.253_314_137_315_500_3;

/// One draw of (last zero, symmetric local time, position) at a fixed time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointTriple {
    pub g: f64,
    pub l: f64,
    pub b: f64,
}

impl EndpointTriple {
    pub fn new(g: f64, l: f64, b: f64, t: f64) -> Result<Self> {
        if !(0.0..=t).contains(&g) || !(l >= 0.0) || (b != 0.0 && g >= t) {
            return domain(format!("inconsistent endpoint triple ({g}, {l}, {b}) at t = {t}"));
        }
        Ok(Self { g, l, b })
    }

    /// Normalized local time `l / √g`.
    pub fn normalized_local_time(&self) -> f64 {
        self.l / self.g.sqrt()
    }
}

/// Standard normal CDF `Φ`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// CDF `2Φ(x/σ) - 1` of `|N(0, σ²)|`.
pub fn half_normal_cdf(x: f64, sigma: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        erf(x / (sigma * std::f64::consts::SQRT_2))
    }
}

pub fn arcsin_cdf(u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return domain(format!("arcsine cdf argument {u} outside [0, 1]"));
    }
    Ok(FRAC_2_PI * u.sqrt().asin())
}

pub fn arcsin_density(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    1.0 / (PI * (u * (1.0 - u)).sqrt())
}

/// Inverse arcsine CDF.
pub fn arcsin_quantile(p: f64) -> f64 {
    let s = (0.5 * PI * p).sin();
    s * s
}

pub fn arcsin_sample<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    arcsin_quantile(rng.sample(Open01))
}

pub fn rayleigh_cdf(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return domain(format!("rayleigh cdf argument {x} < 0"));
    }
    Ok(-(-0.5 * x * x).exp_m1())
}

/// Inverse Rayleigh survival function: `√(-2 ln u)`.
pub fn rayleigh_from_uniform(u: f64) -> f64 {
    (-2.0 * u.ln()).sqrt()
}

pub fn rayleigh_sample<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rayleigh_from_uniform(rng.sample(Open01))
}

/// `+1` iff `u < p`.
pub fn rademacher_from_uniform(p: f64, u: f64) -> i8 {
    if u < p {
        1
    } else {
        -1
    }
}

pub fn rademacher_sample<R: Rng + ?Sized>(p: f64, rng: &mut R) -> Result<i8> {
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("rademacher parameter {p} outside [0, 1]"));
    }
    Ok(rademacher_from_uniform(p, rng.random()))
}

/// Exact draw of `(G_t, L_t, B_t)` for the process started at zero.
pub fn endpoint_triple_sample<R: Rng + ?Sized>(
    beta: &BetaFunction,
    t: f64,
    rng: &mut R,
) -> Result<EndpointTriple> {
    if !(t > 0.0) {
        return domain(format!("endpoint time {t} must be positive"));
    }
    let g = t * arcsin_sample(rng);
    let l = g.sqrt() * rayleigh_sample(rng);
    let m = rayleigh_sample(rng);
    let p = 0.5 * (1.0 + beta.eval(g)?);
    let y = rademacher_sample(p, rng)?;
    Ok(EndpointTriple {
        g,
        l,
        b: f64::from(y) * (t - g).sqrt() * m,
    })
}

/// `n` exact endpoint draws with seed `seed`, generated in fixed-size chunks with one random
/// stream per chunk.
pub fn endpoint_triples(beta: &BetaFunction, t: f64, seed: u64, n: u64) -> Result<Vec<EndpointTriple>> {
    let chunks = n.div_ceil(TRIPLE_CHUNK);
    let parts = map_indexed(chunks, |c| {
        let mut rng = RngStream::new(seed, c);
        let len = TRIPLE_CHUNK.min(n - c * TRIPLE_CHUNK);
        (0..len).map(|_| endpoint_triple_sample(beta, t, &mut rng)).collect::<Result<Vec<_>>>()
    });
    let mut out = Vec::with_capacity(n as usize);
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// Joint density of `(G_t, L_t, B_t)` at `(s, l, x)`; zero for `s ∉ (0, t)`.
pub fn trivariate_density(beta: &BetaFunction, t: f64, s: f64, l: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) || !(l >= 0.0) {
        return domain(format!("need t > 0 and l >= 0, got t = {t}, l = {l}"));
    }
    if !(s > 0.0 && s < t) {
        return Ok(0.0);
    }
    let sign = if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    };
    let skew = 0.5 * (1.0 + sign * beta.eval(s)?);
    let r = t - s;
    let local = (2.0 / (PI * s * s * s)).sqrt() * l * (-l * l / (2.0 * s)).exp();
    let meander = x.abs() * INV_SQRT_2PI / (r * r * r).sqrt() * (-x * x / (2.0 * r)).exp();
    Ok(skew * local * meander)
}

/// `(2π)^{-1/2} ∫₀ᵗ β(s) s^{-1/2} e^{-λ²(t-s)/2} ds` via `s = v²`.
fn weighted_beta_integral(
    beta: &BetaFunction,
    t: f64,
    lambda: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let cuts = cut_points(0.0, t.sqrt(), beta.breakpoints_in(0.0, t).into_iter().map(f64::sqrt));
    let l2 = 0.5 * lambda * lambda;
    let est = integrate(
        |v| {
            let s = v * v;
            Ok(2.0 * beta.eval(s)? * (-l2 * (t - s)).exp())
        },
        &cuts,
        quad,
    )?;
    Ok(INV_SQRT_2PI * est.value)
}

/// Expected local-time integral `E⁰ ∫₀ᵗ β(s) dL_s`.
pub fn h_zero(beta: &BetaFunction, t: f64, quad: &QuadratureConfig) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("need t > 0, got {t}"));
    }
    weighted_beta_integral(beta, t, 0.0, quad)
}

/// Characteristic function `E⁰ exp(iλ B_t)`.
pub fn char_fn_zero(
    beta: &BetaFunction,
    t: f64,
    lambda: f64,
    quad: &QuadratureConfig,
) -> Result<Complex64> {
    if !(t > 0.0) {
        return domain(format!("need t > 0, got {t}"));
    }
    let re = (-0.5 * lambda * lambda * t).exp();
    if lambda == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(Complex64::new(re, lambda * weighted_beta_integral(beta, t, lambda, quad)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use approx::assert_relative_eq;

    fn q() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn arcsine_cdf_values() {
        assert_relative_eq!(arcsin_cdf(0.5).unwrap(), 0.5, epsilon = 1e-15);
        assert_relative_eq!(arcsin_cdf(0.25).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        assert!(arcsin_cdf(1.5).is_err());
        for p in [0.1, 0.5, 0.9] {
            assert_relative_eq!(arcsin_cdf(arcsin_quantile(p)).unwrap(), p, epsilon = 1e-14);
        }
    }

    #[test]
    fn normal_cdfs() {
        assert_relative_eq!(normal_cdf(0.0), 0.5, epsilon = 1e-15);
        assert_relative_eq!(normal_cdf(1.959_963_984_540_054), 0.975, epsilon = 1e-11);
        assert_relative_eq!(half_normal_cdf(0.674_489_750_196_081_7, 1.0), 0.5, epsilon = 1e-11);
        assert_relative_eq!(half_normal_cdf(2.0, 2.0), 2.0 * normal_cdf(1.0) - 1.0, epsilon = 1e-14);
        assert_eq!(half_normal_cdf(-1.0, 1.0), 0.0);
    }

    #[test]
    fn rayleigh_cdf_values() {
        assert_eq!(rayleigh_cdf(0.0).unwrap(), 0.0);
        assert_relative_eq!(rayleigh_cdf(1.177_410).unwrap(), 0.5, epsilon = 1e-6);
        assert!(rayleigh_cdf(-1.0).is_err());
        assert_relative_eq!(RAYLEIGH_MEAN, (PI / 2.0).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn rayleigh_mean_by_simulation() {
        let mut rng = RngStream::new(11, 0);
        let n = 1_000_000;
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..n {
            let x = rayleigh_sample(&mut rng);
            sum += x;
            sq += x * x;
        }
        let mean = sum / n as f64;
        let sd = (sq / n as f64 - mean * mean).sqrt();
        assert!((mean - RAYLEIGH_MEAN).abs() < 3.0 * sd / (n as f64).sqrt(), "{mean}");
    }

    #[test]
    fn rademacher_draws() {
        let mut rng = RngStream::new(3, 0);
        assert!((0..1000).all(|_| rademacher_sample(1.0, &mut rng).unwrap() == 1));
        assert!((0..1000).all(|_| rademacher_sample(0.0, &mut rng).unwrap() == -1));
        assert!(rademacher_sample(1.2, &mut rng).is_err());
        let n = 100_000;
        let mean = (0..n)
            .map(|_| f64::from(rademacher_sample(0.75, &mut rng).unwrap()))
            .sum::<f64>()
            / n as f64;
        let tol = 3.0 * (0.75f64 * 0.25).sqrt() * 2.0 / (n as f64).sqrt();
        assert!((mean - 0.5).abs() < tol, "{mean}");
    }

    #[test]
    fn reflecting_coefficient_gives_positive_endpoints() {
        let mut rng = RngStream::new(5, 0);
        let beta = BetaFunction::Constant(1.0);
        for _ in 0..10_000 {
            let e = endpoint_triple_sample(&beta, 2.0, &mut rng).unwrap();
            assert!(e.b >= 0.0 && e.g <= 2.0 && e.l >= 0.0);
        }
        assert!(endpoint_triple_sample(&beta, 0.0, &mut rng).is_err());
    }

    #[test]
    fn trivariate_point_values() {
        let zero = BetaFunction::Constant(0.0);
        // (1/2)·√(2/(π/8))·e^{-1}·(2π/8)^{-1/2}·e^{-1}
        let expected = 0.5
            * (2.0 / (PI * 0.125)).sqrt()
            * (-1.0f64).exp()
            * INV_SQRT_2PI
            / 0.125f64.sqrt()
            * (-1.0f64).exp();
        assert_relative_eq!(expected, 0.172_316, epsilon = 1e-5);
        assert_relative_eq!(
            trivariate_density(&zero, 1.0, 0.5, 1.0, 1.0).unwrap(),
            0.172_316,
            epsilon = 1e-5
        );
        let one = BetaFunction::Constant(1.0);
        assert_eq!(trivariate_density(&one, 1.0, 0.5, 1.0, -0.3).unwrap(), 0.0);
        assert_eq!(trivariate_density(&one, 1.0, 0.0, 1.0, 0.3).unwrap(), 0.0);
        assert_eq!(trivariate_density(&one, 1.0, 1.0, 1.0, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn h_zero_values() {
        assert_eq!(h_zero(&BetaFunction::Constant(0.0), 1.0, &q()).unwrap(), 0.0);
        let two_over_pi = (2.0 / PI).sqrt();
        assert_relative_eq!(
            h_zero(&BetaFunction::Constant(1.0), 1.0, &q()).unwrap(),
            two_over_pi,
            epsilon = 1e-9
        );
        assert_relative_eq!(
            h_zero(&BetaFunction::Constant(0.5), 4.0, &q()).unwrap(),
            2.0 / (2.0 * PI).sqrt(),
            epsilon = 1e-9
        );
        // step: 0.8·2√0.5 - 0.6·2(1 - √0.5), scaled
        let step = BetaFunction::step(vec![0.0, 0.5], vec![0.8, -0.6]).unwrap();
        let exact = INV_SQRT_2PI * (0.8 * 2.0 * 0.5f64.sqrt() - 0.6 * 2.0 * (1.0 - 0.5f64.sqrt()));
        assert_relative_eq!(h_zero(&step, 1.0, &q()).unwrap(), exact, epsilon = 1e-12);
    }

    #[test]
    fn char_fn_values() {
        let z = char_fn_zero(&BetaFunction::Constant(0.0), 1.0, 1.0, &q()).unwrap();
        assert_relative_eq!(z.re, 0.606_531, epsilon = 1e-6);
        assert_eq!(z.im, 0.0);
        let step = BetaFunction::step(vec![0.0, 0.5], vec![0.8, -0.6]).unwrap();
        assert_eq!(char_fn_zero(&step, 1.0, 0.0, &q()).unwrap(), Complex64::new(1.0, 0.0));
        for lambda in [0.1, 0.5, 1.0, 3.0, 10.0] {
            for beta in [step.clone(), BetaFunction::Constant(1.0), BetaFunction::Constant(-0.7)] {
                assert!(char_fn_zero(&beta, 1.3, lambda, &q()).unwrap().norm() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn triples_are_chunk_invariant() {
        let beta = BetaFunction::step(vec![0.0, 0.5], vec![0.8, -0.6]).unwrap();
        let a = endpoint_triples(&beta, 1.0, 3, 25_000).unwrap();
        let b = endpoint_triples(&beta, 1.0, 3, 15_000).unwrap();
        assert_eq!(a.len(), 25_000);
        assert_eq!(&a[..15_000], &b[..]);
    }
}
