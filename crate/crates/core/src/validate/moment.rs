//! Fourth-moment increment bound `E|X_{t+ε} - X_t|⁴ ≤ C ε²`.

use super::TestReport;
use crate::error::{domain, Result};
use crate::simulate::{map_paths, PathSource};

/// Relative slack allowed on the bound.
const SLACK: f64 = 1.1;

/// Estimates `E|X_{t+ε} - X_t|⁴` for each `ε` over `n_paths` paths of
/// `source` and checks it against `bound_const·ε²`.
///
/// Passes when every estimate is at most `bound_const·ε²·1.1` plus three
/// standard errors. The statistic is the largest empirical constant
/// `estimate/ε²`; the residual is the largest `(estimate - 3 se)/(bound_const·ε²)`,
/// compared with 1.1.
pub fn moment_scaling_check<S: PathSource + ?Sized>(
    source: &S,
    t: f64,
    eps_list: &[f64],
    n_paths: u64,
    bound_const: f64,
) -> Result<TestReport> {
    if eps_list.is_empty() || n_paths < 2 || !(bound_const > 0.0) {
        return domain("moment check needs increments, two or more paths and a positive constant");
    }
    let grid = source.grid();
    let index = |s: f64| -> Result<usize> {
        let i = grid.index_at(s)?;
        if (grid.time(i) - s).abs() > 1e-9 * s.max(1.0) {
            return domain(format!("time {s} is not on the path grid"));
        }
        Ok(i)
    };
    let i0 = index(t)?;
    let ends = eps_list
        .iter()
        .map(|&e| if e > 0.0 { index(t + e) } else { domain(format!("increment {e} must be positive")) })
        .collect::<Result<Vec<_>>>()?;
    let fourth = map_paths(source, n_paths, |p| {
        Ok(ends.iter().map(|&j| (p.values[j] - p.values[i0]).powi(4)).collect::<Vec<_>>())
    })?;

    let n = n_paths as f64;
    let (mut stat, mut resid): (f64, f64) = (0.0, f64::NEG_INFINITY);
    for (k, &eps) in eps_list.iter().enumerate() {
        let mean = fourth.iter().map(|v| v[k]).sum::<f64>() / n;
        let var = fourth.iter().map(|v| (v[k] - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        let scale = eps * eps;
        stat = stat.max(mean / scale);
        resid = resid.max((mean - 3.0 * se) / (bound_const * scale));
    }
    Ok(TestReport::residual("moment_scaling", stat, resid, SLACK, n_paths).with_seed(source.seed()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beta::BetaFunction;
    use crate::grid::TimeGrid;
    use crate::simulate::{BmSource, ExcursionSource};

    #[test]
    fn brownian_increments_have_constant_three() {
        let grid = TimeGrid::with_step(0.35, 1e-3).unwrap();
        let src = BmSource { grid, seed: 5 };
        let r = moment_scaling_check(&src, 0.3, &[0.01, 0.02, 0.05], 20_000, 6.0).unwrap();
        assert!(r.passed);
        assert!((r.statistic - 3.0).abs() < 0.3, "{}", r.statistic);
        // twice the margin: a bound of 3 is at the edge, 1.5 fails
        assert!(!moment_scaling_check(&src, 0.3, &[0.05], 20_000, 1.5).unwrap().passed);
    }

    #[test]
    fn skew_paths_pass() {
        let grid = TimeGrid::with_step(0.35, 1e-3).unwrap();
        let beta = BetaFunction::step(vec![0.0], vec![0.9]).unwrap();
        let src = ExcursionSource { beta, grid, seed: 6 };
        assert!(moment_scaling_check(&src, 0.3, &[0.01, 0.05], 20_000, 6.0).unwrap().passed);
    }

    #[test]
    fn off_grid_increment_rejected() {
        let grid = TimeGrid::with_step(0.35, 1e-2).unwrap();
        let src = BmSource { grid, seed: 5 };
        assert!(moment_scaling_check(&src, 0.3, &[0.005], 100, 6.0).is_err());
        assert!(moment_scaling_check(&src, 0.3, &[0.1], 100, 6.0).is_err());
    }
}
