//! Transition density of the skew process and its consistency functionals.
//!
//! Started from `x` at time `s`, the density at `(t, y)` is the sum of a
//! first-passage term, in which the path reaches zero and then leaves it for
//! good at some time `s + u`,
//!
//! ```text
//! |y|/π ∫₀^τ (1 + sgn(y) β(s+u))/2 · u^{-1/2} (τ-u)^{-3/2} e^{-y²/2(τ-u)} e^{-x²/2u} du,   τ = t - s,
//! ```
//!
//! and, when `x` and `y` share a sign, the density of Brownian motion killed
//! at zero. The `u`-integral is split at `τ/2`; substituting `u = v²` on the
//! left half and `τ - u = w²` on the right half removes both endpoint
//! singularities. Step breakpoints and grid nodes of `β` become panel cuts.

use num_complex::Complex64;

use crate::beta::BetaFunction;
use crate::error::{domain, Result};
use crate::quadrature::{cut_points, integrate, Estimate, QuadratureConfig};

/// Below this `|y|` the density is replaced by its symmetric limit at zero.
pub const ZERO_Y: f64 = 1e-8;
/// Smallest admissible `t - s`.
pub const MIN_SPAN: f64 = 1e-10;
/// Half-width, in standard deviations, of the window used for `y`-integrals.
pub const TAIL_SD: f64 = 12.0;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

fn sgn(y: f64) -> f64 {
    if y > 0.0 {
        1.0
    } else if y < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Upper bound on the mass of `N(0, 1)` outside `[-k, k]`.
fn gaussian_two_tail(k: f64) -> f64 {
    // Mills ratio bound: P(|Z| > k) <= 2 φ(k) / k
    2.0 * INV_SQRT_2PI * (-0.5 * k * k).exp() / k
}

/// Brownian transition density `(2πt)^{-1/2} exp(-(y-x)²/2t)`.
pub fn gaussian_kernel(t: f64, x: f64, y: f64) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("gaussian kernel needs t > 0, got {t}"));
    }
    Ok(INV_SQRT_2PI / t.sqrt() * (-(y - x) * (y - x) / (2.0 * t)).exp())
}

/// Arguments of `p^β(s, t; x, y)`.
#[derive(Debug, Clone, Copy)]
pub struct DensityQuery<'a> {
    pub beta: &'a BetaFunction,
    pub s: f64,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub quad: QuadratureConfig,
}

impl<'a> DensityQuery<'a> {
    pub fn new(beta: &'a BetaFunction, s: f64, t: f64, x: f64, y: f64) -> Self {
        Self {
            beta,
            s,
            t,
            x,
            y,
            quad: QuadratureConfig::default(),
        }
    }

    pub fn with_quad(mut self, quad: QuadratureConfig) -> Self {
        self.quad = quad;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.s >= 0.0) || !self.t.is_finite() {
            return domain(format!("need 0 <= s and finite t, got s = {}, t = {}", self.s, self.t));
        }
        if !(self.t - self.s >= MIN_SPAN) {
            return domain(format!(
                "need t - s >= {MIN_SPAN:e}, got s = {}, t = {}",
                self.s, self.t
            ));
        }
        if !(self.x.is_finite() && self.y.is_finite()) {
            return domain("x and y must be finite");
        }
        Ok(())
    }
}

/// The first-passage term with the `|y|/π` prefactor applied.
fn passage_term(
    beta: &BetaFunction,
    s: f64,
    tau: f64,
    x: f64,
    y: f64,
    quad: &QuadratureConfig,
) -> Result<Estimate> {
    let sign = sgn(y);
    let weight = |u: f64| -> Result<f64> { Ok(0.5 * (1.0 + sign * beta.eval(s + u)?)) };
    let (x2, y2) = (x * x, y * y);
    let half = tau / 2.0;
    let edge = half.sqrt();

    let mut left_cuts = Vec::new();
    let mut right_cuts = Vec::new();
    for b in beta.breakpoints_in(s, s + tau) {
        let u = b - s;
        if u < half {
            left_cuts.push(u.sqrt());
        } else if u > half {
            right_cuts.push((tau - u).sqrt());
        }
    }

    // u = v², du = 2v dv
    let left = integrate(
        |v| {
            let u = v * v;
            let r = tau - u;
            let mut expo = -y2 / (2.0 * r);
            if x2 > 0.0 {
                expo -= x2 / (2.0 * u);
            }
            if expo < -745.0 {
                return Ok(0.0);
            }
            Ok(2.0 * weight(u)? * expo.exp() / (r * r.sqrt()))
        },
        &cut_points(0.0, edge, left_cuts),
        quad,
    )?;

    // τ - u = w², du = 2w dw
    let right = integrate(
        |w| {
            let r = w * w;
            let u = tau - r;
            let expo = -y2 / (2.0 * r) - x2 / (2.0 * u);
            if !(expo > -745.0) {
                return Ok(0.0);
            }
            Ok(2.0 * weight(u)? * expo.exp() / (r * u.sqrt()))
        },
        &cut_points(0.0, edge, right_cuts),
        quad,
    )?;

    let scale = y.abs() / std::f64::consts::PI;
    Ok(Estimate {
        value: scale * (left.value + right.value),
        abs_err: scale * (left.abs_err + right.abs_err),
    })
}

/// Density of the killed Brownian motion, nonzero only when `xy > 0`.
fn killed_term(tau: f64, x: f64, y: f64) -> f64 {
    if x * y <= 0.0 {
        return 0.0;
    }
    INV_SQRT_2PI / tau.sqrt()
        * ((-(y - x) * (y - x) / (2.0 * tau)).exp() - (-(y + x) * (y + x) / (2.0 * tau)).exp())
}

/// `p^β(0, t; 0, y)` with its quadrature error estimate.
pub fn density_from_zero_estimate(
    beta: &BetaFunction,
    t: f64,
    y: f64,
    quad: &QuadratureConfig,
) -> Result<Estimate> {
    transition_density_estimate(&DensityQuery::new(beta, 0.0, t, 0.0, y).with_quad(*quad))
}

/// Density at `y` of the process started from zero at time zero.
pub fn density_from_zero(
    beta: &BetaFunction,
    t: f64,
    y: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    Ok(density_from_zero_estimate(beta, t, y, quad)?.value)
}

/// `p^β(s, t; x, y)` with its quadrature error estimate.
pub fn transition_density_estimate(q: &DensityQuery<'_>) -> Result<Estimate> {
    q.validate()?;
    let tau = q.t - q.s;
    if q.y.abs() < ZERO_Y {
        // symmetric limit: the killed term vanishes and the passage term
        // concentrates at u = τ
        let b = q.beta.eval_left(q.t)?;
        return Ok(Estimate::exact(
            (1.0 + sgn(q.y) * b) * gaussian_kernel(tau, q.x, 0.0)?,
        ));
    }
    let passage = passage_term(q.beta, q.s, tau, q.x, q.y, &q.quad)?;
    Ok(passage + Estimate::exact(killed_term(tau, q.x, q.y)))
}

pub fn transition_density(q: &DensityQuery<'_>) -> Result<f64> {
    Ok(transition_density_estimate(q)?.value)
}

/// `|∫ p^β(s, t; x, y) dy - 1|`, with the error estimate including the
/// analytic bound on the mass outside the integration window.
pub fn normalization_residual_estimate(
    beta: &BetaFunction,
    s: f64,
    t: f64,
    x: f64,
    quad: &QuadratureConfig,
) -> Result<Estimate> {
    DensityQuery::new(beta, s, t, x, 0.0).validate()?;
    let sd = (t - s).sqrt();
    let lo = x.min(0.0) - TAIL_SD * sd;
    let hi = x.max(0.0) + TAIL_SD * sd;
    let mass = integrate(
        |y| transition_density(&DensityQuery::new(beta, s, t, x, y).with_quad(*quad)),
        &cut_points(lo, hi, [0.0, x]),
        quad,
    )?;
    // p^β ≤ 2 p(t - s, x, ·) pointwise
    let tail = 2.0 * gaussian_two_tail(TAIL_SD);
    Ok(Estimate {
        value: (mass.value - 1.0).abs(),
        abs_err: mass.abs_err + tail,
    })
}

pub fn normalization_residual(
    beta: &BetaFunction,
    s: f64,
    t: f64,
    x: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    Ok(normalization_residual_estimate(beta, s, t, x, quad)?.value)
}

/// `|∫ p^β(s, t; x, y) p^β(t, v; y, z) dy - p^β(s, v; x, z)|`.
#[allow(clippy::too_many_arguments)]
pub fn ck_residual_estimate(
    beta: &BetaFunction,
    s: f64,
    t: f64,
    v: f64,
    x: f64,
    z: f64,
    quad: &QuadratureConfig,
) -> Result<Estimate> {
    if !(s < t && t < v) {
        return domain(format!("need s < t < v, got {s}, {t}, {v}"));
    }
    let sd = (v - s).sqrt();
    let lo = x.min(z).min(0.0) - TAIL_SD * sd;
    let hi = x.max(z).max(0.0) + TAIL_SD * sd;
    let chained = integrate(
        |y| {
            let first = transition_density(&DensityQuery::new(beta, s, t, x, y).with_quad(*quad))?;
            if first == 0.0 {
                return Ok(0.0);
            }
            let second = transition_density(&DensityQuery::new(beta, t, v, y, z).with_quad(*quad))?;
            Ok(first * second)
        },
        &cut_points(lo, hi, [0.0, x, z]),
        quad,
    )?;
    let direct = transition_density_estimate(&DensityQuery::new(beta, s, v, x, z).with_quad(*quad))?;
    Ok(Estimate {
        value: (chained.value - direct.value).abs(),
        abs_err: chained.abs_err + direct.abs_err,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn ck_residual(
    beta: &BetaFunction,
    s: f64,
    t: f64,
    v: f64,
    x: f64,
    z: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    Ok(ck_residual_estimate(beta, s, t, v, x, z, quad)?.value)
}

/// `∫ e^{iλy} p^β(0, t; 0, y) dy` by quadrature on `|y| ≤ 12√t`.
pub fn fourier_from_zero(
    beta: &BetaFunction,
    t: f64,
    lambda: f64,
    quad: &QuadratureConfig,
) -> Result<Complex64> {
    if !(t > 0.0) {
        return domain(format!("need t > 0, got {t}"));
    }
    let reach = TAIL_SD * t.sqrt();
    let cuts = [-reach, 0.0, reach];
    let re = integrate(
        |y| Ok((lambda * y).cos() * density_from_zero(beta, t, y, quad)?),
        &cuts,
        quad,
    )?;
    let im = integrate(
        |y| Ok((lambda * y).sin() * density_from_zero(beta, t, y, quad)?),
        &cuts,
        quad,
    )?;
    Ok(Complex64::new(re.value, im.value))
}
