//! Path simulation.
//!
//! Two constructions are provided: excursion flipping of a driving Brownian
//! motion for piecewise constant `β` (exact in law at grid times, see
//! [`ExcursionSkeleton`]), and an Euler scheme for the space-transformed SDE
//! for smooth `β`. Path `i` of a batch draws from the streams
//! `PathStreams::new(seed, i)`, so batches are reproducible and identical
//! under parallel and sequential execution.

mod bridge;
mod excursion;
mod functional;
mod sde;

use rand::Rng;
use rand_distr::StandardNormal;

pub use bridge::{last_zero_in_interval, zero_probability};
pub use excursion::{coupled_pair, excursion_flip_path, ExcursionSkeleton};
pub use functional::{default_occupation_eps, last_zero, local_time_occupation, ZERO_TOL};
pub use sde::{smooth_sde_endpoint, smooth_sde_path, SDE_MARGIN};

use crate::beta::BetaFunction;
use crate::error::Result;
use crate::grid::{PathKind, SamplePath, TimeGrid};
use crate::parallel::map_indexed;
use crate::rng::{PathStreams, RngStream};

fn bm_increments(grid: TimeGrid, x0: f64, rng: &mut RngStream) -> Vec<f64> {
    let sqrt_dt = grid.dt().sqrt();
    let mut values = Vec::with_capacity(grid.n_steps() + 1);
    let mut x = x0;
    values.push(x);
    for _ in 0..grid.n_steps() {
        let z: f64 = rng.sample(StandardNormal);
        x += sqrt_dt * z;
        values.push(x);
    }
    values
}

/// Brownian motion from `x0` on `grid`.
pub fn bm_path(grid: TimeGrid, x0: f64, rng: &mut RngStream) -> SamplePath {
    let values = bm_increments(grid, x0, rng);
    SamplePath {
        grid,
        values,
        seed: rng.seed(),
        kind: PathKind::DrivingBm,
        zeros: None,
    }
}

/// A reproducible family of paths indexed by path id.
pub trait PathSource: Sync {
    fn grid(&self) -> TimeGrid;
    fn seed(&self) -> u64;
    fn path(&self, path_id: u64) -> Result<SamplePath>;
}

/// Brownian motion started at zero.
#[derive(Debug, Clone)]
pub struct BmSource {
    pub grid: TimeGrid,
    pub seed: u64,
}

impl PathSource for BmSource {
    fn grid(&self) -> TimeGrid {
        self.grid
    }
    fn seed(&self) -> u64 {
        self.seed
    }
    fn path(&self, path_id: u64) -> Result<SamplePath> {
        Ok(bm_path(self.grid, 0.0, &mut PathStreams::new(self.seed, path_id).driving))
    }
}

/// Excursion-flip paths started at zero.
#[derive(Debug, Clone)]
pub struct ExcursionSource {
    pub beta: BetaFunction,
    pub grid: TimeGrid,
    pub seed: u64,
}

impl PathSource for ExcursionSource {
    fn grid(&self) -> TimeGrid {
        self.grid
    }
    fn seed(&self) -> u64 {
        self.seed
    }
    fn path(&self, path_id: u64) -> Result<SamplePath> {
        excursion_flip_path(&self.beta, self.grid, &mut PathStreams::new(self.seed, path_id))
    }
}

/// Transformed-SDE paths started at `x0`.
#[derive(Debug, Clone)]
pub struct SdeSource {
    pub beta: BetaFunction,
    pub grid: TimeGrid,
    pub x0: f64,
    pub seed: u64,
}

impl PathSource for SdeSource {
    fn grid(&self) -> TimeGrid {
        self.grid
    }
    fn seed(&self) -> u64 {
        self.seed
    }
    fn path(&self, path_id: u64) -> Result<SamplePath> {
        smooth_sde_path(&self.beta, self.grid, self.x0, &mut PathStreams::new(self.seed, path_id))
    }
}

/// Generates paths `0..n` and reduces each with `f`, keeping path order.
/// Paths are dropped after reduction, so memory stays proportional to the
/// reduced output.
pub fn map_paths<S, T, F>(source: &S, n: u64, f: F) -> Result<Vec<T>>
where
    S: PathSource + ?Sized,
    T: Send,
    F: Fn(&SamplePath) -> Result<T> + Sync + Send,
{
    map_indexed(n, |i| source.path(i).and_then(|p| f(&p)))
        .into_iter()
        .collect()
}
