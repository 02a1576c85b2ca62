//! Euler scheme for the process through the space transform
//! `r(t, y) = (1 ± β(t))/2 · y`, which turns it into an SDE without local
//! time for smooth `β` bounded away from `±1`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::beta::BetaFunction;
use crate::error::{domain, Error, Result};
use crate::grid::{PathKind, SamplePath, TimeGrid};
use crate::rng::PathStreams;

/// How close `|β|` may come to 1.
pub const SDE_MARGIN: f64 = 1e-3;

struct Transform<'a> {
    beta: &'a BetaFunction,
}

impl Transform<'_> {
    fn coefficient(&self, t: f64) -> Result<(f64, f64)> {
        let b = self.beta.eval(t)?;
        if b.abs() > 1.0 - SDE_MARGIN {
            return domain(format!("|beta({t})| = {} exceeds 1 - {SDE_MARGIN}", b.abs()));
        }
        Ok((b, self.beta.derivative(t)?))
    }

    fn r(b: f64, y: f64) -> f64 {
        if y >= 0.0 {
            0.5 * (1.0 + b) * y
        } else {
            0.5 * (1.0 - b) * y
        }
    }

    fn r_inv(b: f64, x: f64) -> f64 {
        if x >= 0.0 {
            2.0 * x / (1.0 + b)
        } else {
            2.0 * x / (1.0 - b)
        }
    }

    /// `(r'_y, r'_t)` at `(t, y)` given `β(t)` and `β'(t)`.
    fn partials(b: f64, db: f64, y: f64) -> (f64, f64) {
        if y > 0.0 {
            (0.5 * (1.0 + b), 0.5 * db * y)
        } else if y < 0.0 {
            (0.5 * (1.0 - b), -0.5 * db * y)
        } else {
            (0.5, 0.0)
        }
    }
}

fn check_variant(beta: &BetaFunction, grid: TimeGrid) -> Result<()> {
    match beta {
        BetaFunction::Step(_) => Err(Error::UnsupportedVariant(
            "the transformed SDE needs a constant or smooth beta".into(),
        )),
        BetaFunction::SmoothGrid(g) if g.horizon() < grid.t_max() * (1.0 - 1e-12) => domain(format!(
            "beta grid ends at {} before t_max = {}",
            g.horizon(),
            grid.t_max()
        )),
        _ => Ok(()),
    }
}

/// Runs the Euler recursion, calling `visit(i, x_i)` at every grid point.
fn run(
    beta: &BetaFunction,
    grid: TimeGrid,
    x0: f64,
    streams: &mut PathStreams,
    mut visit: impl FnMut(usize, f64),
) -> Result<()> {
    check_variant(beta, grid)?;
    let tr = Transform { beta };
    let dt = grid.dt();
    let sqrt_dt = dt.sqrt();
    let (mut b, mut db) = tr.coefficient(0.0)?;
    let mut y = Transform::r_inv(b, x0);
    visit(0, x0);
    for i in 0..grid.n_steps() {
        let z: f64 = streams.driving.sample(StandardNormal);
        let (ry, rt) = Transform::partials(b, db, y);
        y += sqrt_dt * z / ry - rt / ry * dt;
        (b, db) = tr.coefficient(grid.time(i + 1))?;
        visit(i + 1, Transform::r(b, y));
    }
    Ok(())
}

/// One path of the transformed-SDE scheme started at `x0`.
pub fn smooth_sde_path(
    beta: &BetaFunction,
    grid: TimeGrid,
    x0: f64,
    streams: &mut PathStreams,
) -> Result<SamplePath> {
    let mut values = vec![0.0; grid.n_steps() + 1];
    run(beta, grid, x0, streams, |i, x| values[i] = x)?;
    SamplePath::new(grid, values, streams.seed(), PathKind::IsbmSde)
}

/// The endpoint `X_{t_max}` of [`smooth_sde_path`] without storing the path.
pub fn smooth_sde_endpoint(
    beta: &BetaFunction,
    grid: TimeGrid,
    x0: f64,
    streams: &mut PathStreams,
) -> Result<f64> {
    let mut last = x0;
    run(beta, grid, x0, streams, |_, x| last = x)?;
    Ok(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::bm_path;

    fn grid() -> TimeGrid {
        TimeGrid::with_step(1.0, 1e-3).unwrap()
    }

    #[test]
    fn zero_coefficient_is_the_driving_motion() {
        let beta = BetaFunction::constant(0.0).unwrap();
        for x0 in [0.0, 0.7, -1.3] {
            let p = smooth_sde_path(&beta, grid(), x0, &mut PathStreams::new(8, 3)).unwrap();
            let w = bm_path(grid(), x0, &mut PathStreams::new(8, 3).driving);
            assert_eq!(p.values, w.values);
            assert_eq!(p.kind, PathKind::IsbmSde);
        }
    }

    #[test]
    fn endpoint_matches_path() {
        let beta = BetaFunction::smooth_fn(1.0, 51, |t| 0.6 * (3.0 * t).sin()).unwrap();
        let p = smooth_sde_path(&beta, grid(), 0.1, &mut PathStreams::new(1, 1)).unwrap();
        let e = smooth_sde_endpoint(&beta, grid(), 0.1, &mut PathStreams::new(1, 1)).unwrap();
        assert_eq!(*p.values.last().unwrap(), e);
    }

    #[test]
    fn variant_and_margin_errors() {
        let step = BetaFunction::step(vec![0.0, 0.5], vec![0.1, 0.2]).unwrap();
        assert!(matches!(
            smooth_sde_path(&step, grid(), 0.0, &mut PathStreams::new(0, 0)),
            Err(Error::UnsupportedVariant(_))
        ));
        let edge = BetaFunction::constant(1.0).unwrap();
        assert!(matches!(
            smooth_sde_path(&edge, grid(), 0.0, &mut PathStreams::new(0, 0)),
            Err(Error::Domain(_))
        ));
        let short = BetaFunction::smooth_fn(0.5, 11, |_| 0.1).unwrap();
        assert!(smooth_sde_path(&short, grid(), 0.0, &mut PathStreams::new(0, 0)).is_err());
    }

    #[test]
    fn start_point_is_respected() {
        let beta = BetaFunction::constant(0.6).unwrap();
        for x0 in [0.5, -0.5] {
            let p = smooth_sde_path(&beta, grid(), x0, &mut PathStreams::new(2, 0)).unwrap();
            assert_eq!(p.values[0], x0);
            // first step is an ordinary Gaussian step away from zero
            assert!((p.values[1] - x0).abs() < 0.2);
        }
    }
}
