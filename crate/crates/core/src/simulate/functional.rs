//! Path functionals: last zero and occupation-time local time.

use crate::error::{domain, Result};
use crate::grid::SamplePath;

/// Values with absolute value at most this count as zero.
pub const ZERO_TOL: f64 = 1e-12;

/// Last zero of the path at or before `t`.
///
/// Uses the recorded continuous-path zeros when the path carries them.
/// Otherwise returns the last grid time with a zero value, or the linear
/// interpolation of the last sign change, whichever is later; `0` if none.
pub fn last_zero(path: &SamplePath, t: f64) -> Result<f64> {
    let k = path.grid.index_at(t)?;
    if let Some(zeros) = &path.zeros {
        let n = zeros.partition_point(|&z| z <= t);
        return Ok(if n == 0 { 0.0 } else { zeros[n - 1] });
    }
    let v = &path.values;
    for i in (0..=k).rev() {
        if v[i].abs() <= ZERO_TOL {
            return Ok(path.grid.time(i));
        }
        if i > 0 && v[i - 1] * v[i] < 0.0 {
            let frac = v[i - 1] / (v[i - 1] - v[i]);
            return Ok(path.grid.time(i - 1) + frac * path.grid.dt());
        }
    }
    Ok(0.0)
}

/// Default occupation window half-width for grid step `dt`.
pub fn default_occupation_eps(dt: f64) -> f64 {
    dt.sqrt()
}

/// `(1/2ε)·dt·#{i : t_i ≤ t, |X_{t_i}| < ε}`.
pub fn local_time_occupation(path: &SamplePath, t: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return domain(format!("occupation half-width {eps} must be positive"));
    }
    let k = path.grid.index_at(t)?;
    let count = path.values[..=k].iter().filter(|v| v.abs() < eps).count();
    Ok(count as f64 * path.grid.dt() / (2.0 * eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{PathKind, TimeGrid};

    fn linear(n: usize, f: impl Fn(f64) -> f64) -> SamplePath {
        let g = TimeGrid::new(1.0, n).unwrap();
        let v = (0..=n).map(|i| f(g.time(i))).collect();
        SamplePath::new(g, v, 0, PathKind::DrivingBm).unwrap()
    }

    #[test]
    fn linear_crossing() {
        let p = linear(1000, |s| s - 0.5);
        assert!((last_zero(&p, 1.0).unwrap() - 0.5).abs() <= 1e-3);
        let p = linear(7, |s| s - 0.5);
        assert!((last_zero(&p, 1.0).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(last_zero(&p, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn nonnegative_path_uses_exact_zeros() {
        let p = linear(10, |s| (s - 0.3).abs());
        assert!((last_zero(&p, 1.0).unwrap() - 0.3).abs() < 1e-12);
        let p = linear(10, |s| s * s);
        assert_eq!(last_zero(&p, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn recorded_zeros_take_precedence() {
        let mut p = linear(10, |s| s + 1.0);
        p.zeros = Some(vec![0.05, 0.42, 0.77]);
        assert_eq!(last_zero(&p, 1.0).unwrap(), 0.77);
        assert_eq!(last_zero(&p, 0.5).unwrap(), 0.42);
        assert_eq!(last_zero(&p, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn occupation_of_linear_path() {
        let n = 10_000;
        let p = linear(n, |s| s - 0.5);
        let eps = 0.01;
        let dt = 1.0 / n as f64;
        assert!((local_time_occupation(&p, 1.0, eps).unwrap() - 1.0).abs() <= 2.0 * dt / eps);
        let far = linear(100, |s| s + 1.0);
        assert_eq!(local_time_occupation(&far, 1.0, eps).unwrap(), 0.0);
        assert!(local_time_occupation(&far, 1.0, 0.0).is_err());
    }
}
