//! Excursion flipping: the process is `|W|` with each excursion of the
//! driving motion given an independent sign, `+1` with probability
//! `(1 + β(g))/2` where `g` is the excursion's left end.

use rand::distr::Open01;
use rand::Rng;

use super::bridge::{last_zero_in_interval, zero_probability};
use super::bm_increments;
use crate::beta::BetaFunction;
use crate::error::{domain, Error, Result};
use crate::grid::{PathKind, SamplePath, TimeGrid};
use crate::laws::rademacher_from_uniform;
use crate::rng::PathStreams;

/// The randomness of one excursion-flip path, independent of `β`.
///
/// Holds the driving motion on the grid, every grid interval whose bridge
/// touches zero together with the last zero inside it, and one flip uniform
/// per excursion. Applying different coefficients to the same skeleton
/// yields coupled paths.
#[derive(Debug, Clone)]
pub struct ExcursionSkeleton {
    grid: TimeGrid,
    seed: u64,
    w: Vec<f64>,
    /// Indices `i` such that the bridge on `[t_i, t_{i+1}]` touches zero.
    zero_intervals: Vec<usize>,
    /// Last zero inside each of those intervals.
    zeros: Vec<f64>,
    flips: Vec<f64>,
}

impl ExcursionSkeleton {
    pub fn sample(grid: TimeGrid, streams: &mut PathStreams) -> Self {
        let w = bm_increments(grid, 0.0, &mut streams.driving);
        let h = grid.dt();
        let mut zero_intervals = Vec::new();
        let mut zeros = Vec::new();
        for i in 0..grid.n_steps() {
            let (a, b) = (w[i], w[i + 1]);
            let p = zero_probability(a, b, h);
            if p < 1.0 {
                let u: f64 = streams.bridge.random();
                if u >= p {
                    continue;
                }
            }
            let u: f64 = streams.bridge.sample(Open01);
            let g = grid.time(i) + last_zero_in_interval(a, b, h, u);
            zero_intervals.push(i);
            zeros.push(g.min(grid.time(i + 1)));
        }
        let flips = (0..zeros.len()).map(|_| streams.flips.random()).collect();
        Self {
            grid,
            seed: streams.seed(),
            w,
            zero_intervals,
            zeros,
            flips,
        }
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    /// The driving motion on the grid.
    pub fn driving(&self) -> &[f64] {
        &self.w
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    /// Sign of the excursion straddling each grid point (`0` where none has
    /// started yet, which only happens at `t = 0`).
    fn signs(&self, beta: &BetaFunction) -> Result<Vec<f64>> {
        let n = self.w.len();
        let mut signs = vec![0.0; n];
        for (k, (&i, &g)) in self.zero_intervals.iter().zip(&self.zeros).enumerate() {
            let p = 0.5 * (1.0 + beta.eval(g)?);
            let y = f64::from(rademacher_from_uniform(p, self.flips[k]));
            let end = self.zero_intervals.get(k + 1).map_or(n, |&j| j + 1);
            for s in &mut signs[i + 1..end] {
                *s = y;
            }
        }
        Ok(signs)
    }

    /// The path `X = Y·|W|` for coefficient `beta`.
    pub fn apply(&self, beta: &BetaFunction) -> Result<SamplePath> {
        check_piecewise_constant(beta)?;
        let signs = self.signs(beta)?;
        let values = self.w.iter().zip(&signs).map(|(w, y)| y * w.abs()).collect();
        let mut path = SamplePath::new(self.grid, values, self.seed, PathKind::IsbmExcursion)?;
        path.zeros = Some(self.zeros.clone());
        Ok(path)
    }

    /// `|W|`, the common modulus of every path built on this skeleton.
    pub fn reflected(&self) -> Result<SamplePath> {
        let values = self.w.iter().map(|w| w.abs()).collect();
        let mut path = SamplePath::new(self.grid, values, self.seed, PathKind::Reflected)?;
        path.zeros = Some(self.zeros.clone());
        Ok(path)
    }
}

fn check_piecewise_constant(beta: &BetaFunction) -> Result<()> {
    if beta.is_piecewise_constant() {
        Ok(())
    } else {
        Err(Error::UnsupportedVariant(format!(
            "excursion flipping needs a step or constant beta, got {}",
            beta.variant_name()
        )))
    }
}

/// One excursion-flip path started at zero.
pub fn excursion_flip_path(
    beta: &BetaFunction,
    grid: TimeGrid,
    streams: &mut PathStreams,
) -> Result<SamplePath> {
    check_piecewise_constant(beta)?;
    ExcursionSkeleton::sample(grid, streams).apply(beta)
}

/// Two excursion-flip paths sharing the driving motion, the excursion zeros
/// and the flip uniforms. Requires `beta_hi ≥ beta_lo` everywhere.
pub fn coupled_pair(
    beta_hi: &BetaFunction,
    beta_lo: &BetaFunction,
    grid: TimeGrid,
    streams: &mut PathStreams,
) -> Result<(SamplePath, SamplePath)> {
    check_piecewise_constant(beta_hi)?;
    check_piecewise_constant(beta_lo)?;
    check_ordered(beta_hi, beta_lo, grid)?;
    let skeleton = ExcursionSkeleton::sample(grid, streams);
    let mut hi = skeleton.apply(beta_hi)?;
    let mut lo = skeleton.apply(beta_lo)?;
    hi.kind = PathKind::Coupled;
    lo.kind = PathKind::Coupled;
    Ok((hi, lo))
}

/// Checks `hi ≥ lo` at every grid time and every breakpoint of either,
/// which for piecewise constant functions covers the whole horizon.
fn check_ordered(hi: &BetaFunction, lo: &BetaFunction, grid: TimeGrid) -> Result<()> {
    let end = grid.t_max();
    let probes = (0..=grid.n_steps())
        .map(|i| grid.time(i))
        .chain(hi.breakpoints_in(0.0, end))
        .chain(lo.breakpoints_in(0.0, end));
    for t in probes {
        let (h, l) = (hi.eval(t)?, lo.eval(t)?);
        if h < l {
            return domain(format!("coupled coefficients out of order at t = {t}: {h} < {l}"));
        }
    }
    Ok(())
}
