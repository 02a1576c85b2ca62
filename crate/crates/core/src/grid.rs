//! Uniform time grids and sampled paths.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_max: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, n_steps: usize) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) || n_steps == 0 {
            return domain(format!("invalid grid: t_max = {t_max}, n_steps = {n_steps}"));
        }
        Ok(Self { t_max, n_steps })
    }

    /// Grid with step `dt`; `t_max / dt` must be an integer up to rounding.
    pub fn with_step(t_max: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return domain(format!("dt = {dt} must be positive"));
        }
        let ratio = t_max / dt;
        let n = ratio.round();
        if n < 1.0 || (ratio - n).abs() > 1e-6 * n {
            return domain(format!("t_max = {t_max} is not a multiple of dt = {dt}"));
        }
        Self::new(t_max, n as usize)
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        self.t_max / self.n_steps as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt()
    }

    /// Index of the last grid point at or before `t`, with rounding slack.
    pub fn index_at(&self, t: f64) -> Result<usize> {
        let pos = t / self.dt();
        if !(pos >= -1e-9) || pos > self.n_steps as f64 + 1e-6 {
            return domain(format!("t = {t} outside grid [0, {}]", self.t_max));
        }
        Ok(((pos + 1e-9).floor() as usize).min(self.n_steps))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    DrivingBm,
    Reflected,
    IsbmExcursion,
    IsbmSde,
    Coupled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
    pub seed: u64,
    pub kind: PathKind,
    /// Zero times of the underlying continuous path, one per grid interval
    /// that contains a zero (the last zero in that interval). Present for
    /// excursion-built paths, whose sign alone does not reveal every zero.
    pub zeros: Option<Vec<f64>>,
}

impl SamplePath {
    pub fn new(grid: TimeGrid, values: Vec<f64>, seed: u64, kind: PathKind) -> Result<Self> {
        if values.len() != grid.n_steps() + 1 {
            return domain(format!(
                "path has {} values, grid needs {}",
                values.len(),
                grid.n_steps() + 1
            ));
        }
        Ok(Self {
            grid,
            values,
            seed,
            kind,
            zeros: None,
        })
    }

    /// Value at the last grid point at or before `t`.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        Ok(self.values[self.grid.index_at(t)?])
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(|i| self.grid.time(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_basics() {
        let g = TimeGrid::with_step(1.0, 1e-3).unwrap();
        assert_eq!(g.n_steps(), 1000);
        assert_eq!(g.index_at(1.0).unwrap(), 1000);
        assert_eq!(g.index_at(0.3).unwrap(), 300);
        assert!(g.index_at(1.1).is_err());
        assert!(TimeGrid::with_step(1.0, 0.3).is_err());
        assert!(TimeGrid::new(0.0, 4).is_err());
    }

    #[test]
    fn path_length_checked() {
        let g = TimeGrid::new(1.0, 4).unwrap();
        assert!(SamplePath::new(g, vec![0.0; 4], 0, PathKind::DrivingBm).is_err());
        let p = SamplePath::new(g, vec![0.0, 1.0, 2.0, 3.0, 4.0], 0, PathKind::DrivingBm).unwrap();
        assert_eq!(p.value_at(0.5).unwrap(), 2.0);
    }
}
