//! Zeros of a Brownian bridge between two grid values.
//!
//! Between grid points the driving motion is a Brownian bridge, so the
//! existence of a zero and the position of the last zero in an interval are
//! available in closed form and can be sampled exactly from one uniform each.

use statrs::function::erf::erfc;

const SQRT_2PI_LN: f64 = 0.918_938_533_204_672_7;
const BISECT_STEPS: usize = 60;

/// `ln Φ(x)`, accurate far into the lower tail.
pub(crate) fn ln_norm_cdf(x: f64) -> f64 {
    if x > -30.0 {
        return (0.5 * erfc(-x / std::f64::consts::SQRT_2)).ln();
    }
    // Mills ratio asymptotics
    let x2 = x * x;
    -0.5 * x2 - SQRT_2PI_LN - (-x).ln() + (1.0 - 1.0 / x2 + 3.0 / (x2 * x2)).ln()
}

/// Probability that a bridge of length `h` from `a` to `b` touches zero.
pub fn zero_probability(a: f64, b: f64, h: f64) -> f64 {
    if a * b <= 0.0 {
        1.0
    } else {
        (-2.0 * a * b / h).exp()
    }
}

/// Position, measured from the left end, of the last zero of a bridge of
/// length `h` from `a` to `b`, conditioned to touch zero, at the quantile `u`.
///
/// Reversing time, `h` minus the last zero is the first hitting time of zero
/// by the bridge from `b` to `a`; its conditional CDF is inverted by bisection.
pub fn last_zero_in_interval(a: f64, b: f64, h: f64, u: f64) -> f64 {
    if b == 0.0 {
        return h;
    }
    let c = b.abs();
    let end = if b > 0.0 { a } else { -a };
    // ln of e^{-2c·end/h}; the hitting probability is min(1, that)
    let ln_e = -2.0 * c * end / h;
    let ln_hit = ln_e.min(0.0);
    let cdf = |r: f64| {
        let v = r * (h - r) / h;
        let sd = v.sqrt();
        let m = c + (end - c) * r / h;
        let m2 = -c + (end + c) * r / h;
        (ln_norm_cdf(-m / sd) - ln_hit).exp() + (ln_e - ln_hit + ln_norm_cdf(m2 / sd)).exp()
    };
    let (mut lo, mut hi) = (0.0, h);
    for _ in 0..BISECT_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cdf(mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    h - 0.5 * (lo + hi)
}
