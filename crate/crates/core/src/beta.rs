//! The skewness coefficient `β: [0, ∞) → [-1, 1]`.
//!
//! Three representations are supported: a constant, a right-continuous step
//! function, and a smooth function sampled on a uniform grid and interpolated
//! by cubic Hermite splines. The text format used on the command line is
//!
//! ```text
//! const:<v> | step:<t0>:<v0>,<t1>:<v1>,... | grid:<path to CSV with header t,beta>
//! ```

use std::path::Path;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

/// Relative slack allowed when evaluating a grid at its horizon.
const HORIZON_SLACK: f64 = 1e-12;

/// Probe points per dyadic cell are `2^max(PROBE_BITS, SHARED_PROBE_BITS - level)`.
const PROBE_BITS: u32 = 6;
const SHARED_PROBE_BITS: u32 = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum BetaFunction {
    Constant(f64),
    Step(StepBeta),
    SmoothGrid(SmoothGrid),
}

/// Right-continuous, left-limited step function.
///
/// `values[i]` holds on `[breaks[i], breaks[i + 1])`; the last value extends
/// to infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct StepBeta {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

/// Cubic-Hermite interpolant of samples on a uniform grid, with slopes taken
/// from second-order finite differences. Evaluations are clamped to
/// `[-1 + margin, 1 - margin]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothGrid {
    start: f64,
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
    margin: f64,
}

fn check_unit(v: f64, what: &str) -> Result<()> {
    if !(-1.0..=1.0).contains(&v) {
        return domain(format!("{what} {v} outside [-1, 1]"));
    }
    Ok(())
}

impl StepBeta {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != values.len() {
            return domain("step function needs as many breakpoints as values, at least one");
        }
        if breaks[0] != 0.0 {
            return domain(format!("first breakpoint must be 0, got {}", breaks[0]));
        }
        if breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| w[0] >= w[1]) {
            return domain("step breakpoints must be finite and strictly increasing");
        }
        for &v in &values {
            check_unit(v, "step value")?;
        }
        Ok(Self { breaks, values })
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn eval(&self, t: f64) -> f64 {
        let idx = self.breaks.partition_point(|&b| b <= t);
        self.values[idx.saturating_sub(1)]
    }

    fn eval_left(&self, t: f64) -> f64 {
        let idx = self.breaks.partition_point(|&b| b < t);
        self.values[idx.saturating_sub(1)]
    }
}

impl SmoothGrid {
    pub const DEFAULT_MARGIN: f64 = 1e-3;

    pub fn new(times: &[f64], values: &[f64]) -> Result<Self> {
        Self::with_margin(times, values, Self::DEFAULT_MARGIN)
    }

    pub fn with_margin(times: &[f64], values: &[f64], margin: f64) -> Result<Self> {
        if times.len() < 2 || times.len() != values.len() {
            return domain("grid needs at least two (t, beta) samples");
        }
        if !(margin > 0.0 && margin < 1.0) {
            return domain(format!("margin {margin} outside (0, 1)"));
        }
        let n = times.len() - 1;
        let start = times[0];
        let step = (times[n] - start) / n as f64;
        if !(step > 0.0) || !start.is_finite() {
            return domain("grid times must be finite and ascending");
        }
        for (i, &t) in times.iter().enumerate() {
            if (t - (start + i as f64 * step)).abs() > 1e-9 * step.max(1.0) {
                return domain(format!("grid times are not uniform at index {i}"));
            }
        }
        for &v in values {
            check_unit(v, "grid value")?;
        }
        let slopes = finite_difference_slopes(values, step);
        Ok(Self {
            start,
            step,
            values: values.to_vec(),
            slopes,
            margin,
        })
    }

    /// Samples `f` on `n_points` uniform points of `[0, t_max]`.
    pub fn from_fn(t_max: f64, n_points: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n_points < 2 {
            return domain("grid needs at least two points");
        }
        let step = t_max / (n_points - 1) as f64;
        let times: Vec<f64> = (0..n_points).map(|i| i as f64 * step).collect();
        let values: Vec<f64> = times.iter().map(|&t| f(t)).collect();
        Self::new(&times, &values)
    }

    pub fn horizon(&self) -> f64 {
        self.start + (self.values.len() - 1) as f64 * self.step
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |i| self.start + i as f64 * self.step)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let horizon = self.horizon();
        let slack = HORIZON_SLACK * horizon.abs().max(1.0);
        if t < self.start - slack || t > horizon + slack {
            return domain(format!(
                "t = {t} outside grid domain [{}, {horizon}]",
                self.start
            ));
        }
        let pos = ((t - self.start) / self.step).clamp(0.0, (self.values.len() - 1) as f64);
        let k = (pos.floor() as usize).min(self.values.len() - 2);
        Ok((k, pos - k as f64))
    }

    fn raw(&self, t: f64) -> Result<f64> {
        let (k, tau) = self.locate(t)?;
        let (t2, t3) = (tau * tau, tau * tau * tau);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + tau;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        Ok(h00 * self.values[k]
            + h10 * self.step * self.slopes[k]
            + h01 * self.values[k + 1]
            + h11 * self.step * self.slopes[k + 1])
    }

    fn bound(&self) -> f64 {
        1.0 - self.margin
    }

    fn eval(&self, t: f64) -> Result<f64> {
        let b = self.bound();
        Ok(self.raw(t)?.clamp(-b, b))
    }

    fn derivative(&self, t: f64) -> Result<f64> {
        if self.raw(t)?.abs() > self.bound() {
            // clamped region
            return Ok(0.0);
        }
        let (k, tau) = self.locate(t)?;
        let t2 = tau * tau;
        let d00 = 6.0 * t2 - 6.0 * tau;
        let d10 = 3.0 * t2 - 4.0 * tau + 1.0;
        let d01 = -6.0 * t2 + 6.0 * tau;
        let d11 = 3.0 * t2 - 2.0 * tau;
        Ok((d00 * self.values[k] + d01 * self.values[k + 1]) / self.step
            + d10 * self.slopes[k]
            + d11 * self.slopes[k + 1])
    }
}

fn finite_difference_slopes(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    if n == 2 {
        let m = (values[1] - values[0]) / h;
        return vec![m, m];
    }
    let mut slopes = vec![0.0; n];
    slopes[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    slopes[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    for k in 1..n - 1 {
        slopes[k] = (values[k + 1] - values[k - 1]) / (2.0 * h);
    }
    slopes
}

impl BetaFunction {
    pub fn constant(v: f64) -> Result<Self> {
        check_unit(v, "constant")?;
        Ok(Self::Constant(v))
    }

    pub fn step(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(Self::Step(StepBeta::new(breaks, values)?))
    }

    pub fn smooth_fn(t_max: f64, n_points: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Ok(Self::SmoothGrid(SmoothGrid::from_fn(t_max, n_points, f)?))
    }

    /// Value at `t`, right-continuous at step breakpoints.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return domain(format!("beta evaluated at t = {t} < 0"));
        }
        match self {
            Self::Constant(v) => Ok(*v),
            Self::Step(s) => Ok(s.eval(t)),
            Self::SmoothGrid(g) => g.eval(t),
        }
    }

    /// Left limit `β(t⁻)`; equals `eval` except at step breakpoints.
    pub fn eval_left(&self, t: f64) -> Result<f64> {
        match self {
            Self::Step(s) if t >= 0.0 => Ok(s.eval_left(t)),
            _ => self.eval(t),
        }
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return domain(format!("beta derivative at t = {t} < 0"));
        }
        match self {
            Self::Constant(_) => Ok(0.0),
            Self::Step(_) => Err(Error::UnsupportedVariant(
                "derivative of a step function is undefined at its jumps".into(),
            )),
            Self::SmoothGrid(g) => g.derivative(t),
        }
    }

    /// Upper end of the evaluation domain, if bounded.
    pub fn horizon(&self) -> Option<f64> {
        match self {
            Self::SmoothGrid(g) => Some(g.horizon()),
            _ => None,
        }
    }

    /// Upper bound on `|β|`.
    pub fn sup_abs(&self) -> f64 {
        match self {
            Self::Constant(v) => v.abs(),
            Self::Step(s) => s.values.iter().fold(0.0, |m, v| m.max(v.abs())),
            Self::SmoothGrid(g) => g.bound(),
        }
    }

    /// True for the constant and step variants.
    pub fn is_piecewise_constant(&self) -> bool {
        matches!(self, Self::Constant(_) | Self::Step(_))
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Self::Constant(_) => "const",
            Self::Step(_) => "step",
            Self::SmoothGrid(_) => "grid",
        }
    }

    /// Points in the open interval `(a, b)` where the function is not smooth:
    /// step breakpoints, or interpolation nodes of a grid.
    pub fn breakpoints_in(&self, a: f64, b: f64) -> Vec<f64> {
        match self {
            Self::Constant(_) => Vec::new(),
            Self::Step(s) => s.breaks.iter().copied().filter(|&x| x > a && x < b).collect(),
            Self::SmoothGrid(g) => g.times().filter(|&x| x > a && x < b).collect(),
        }
    }

    /// `t ↦ -β(t)`.
    pub fn negated(&self) -> Self {
        match self {
            Self::Constant(v) => Self::Constant(-v),
            Self::Step(s) => Self::Step(StepBeta {
                breaks: s.breaks.clone(),
                values: s.values.iter().map(|v| -v).collect(),
            }),
            Self::SmoothGrid(g) => Self::SmoothGrid(SmoothGrid {
                values: g.values.iter().map(|v| -v).collect(),
                slopes: g.slopes.iter().map(|v| -v).collect(),
                ..g.clone()
            }),
        }
    }

    /// The time shift `t ↦ β(t + by)`.
    pub fn shifted(&self, by: f64) -> Result<Self> {
        if !(by >= 0.0) {
            return domain(format!("shift {by} must be non-negative"));
        }
        Ok(match self {
            Self::Constant(v) => Self::Constant(*v),
            Self::Step(s) => {
                let mut breaks = vec![0.0];
                let mut values = vec![s.eval(by)];
                for (&b, &v) in s.breaks.iter().zip(&s.values) {
                    if b > by {
                        breaks.push(b - by);
                        values.push(v);
                    }
                }
                Self::Step(StepBeta { breaks, values })
            }
            Self::SmoothGrid(g) => {
                if by > g.horizon() {
                    return domain(format!("shift {by} beyond grid horizon {}", g.horizon()));
                }
                Self::SmoothGrid(SmoothGrid {
                    start: g.start - by,
                    ..g.clone()
                })
            }
        })
    }

    /// Reads a `t,beta` CSV with uniform ascending times.
    pub fn from_grid_csv(path: impl AsRef<Path>) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path.as_ref())
            .map_err(|e| Error::Parse(format!("{}: {e}", path.as_ref().display())))?;
        let headers = reader
            .headers()
            .map_err(|e| Error::Parse(e.to_string()))?
            .clone();
        let trimmed: Vec<&str> = headers.iter().map(str::trim).collect();
        if trimmed != ["t", "beta"] {
            return Err(Error::Parse(format!(
                "grid CSV header must be `t,beta`, got `{}`",
                trimmed.join(",")
            )));
        }
        let mut times = Vec::new();
        let mut values = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            let field = |i: usize| -> Result<f64> {
                let raw = record.get(i).unwrap_or("").trim();
                raw.parse()
                    .map_err(|_| Error::Parse(format!("bad number `{raw}` in grid CSV")))
            };
            times.push(field(0)?);
            values.push(field(1)?);
        }
        Ok(Self::SmoothGrid(SmoothGrid::new(&times, &values)?))
    }
}

impl FromStr for BetaFunction {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("{what} in beta text `{text}`"));
        let num = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| bad(&format!("bad number `{s}`")))
        };
        let (kind, rest) = text.split_once(':').ok_or_else(|| bad("missing `:`"))?;
        match kind {
            "const" => Self::constant(num(rest)?),
            "step" => {
                let mut breaks = Vec::new();
                let mut values = Vec::new();
                for piece in rest.split(',') {
                    let (t, v) = piece.split_once(':').ok_or_else(|| bad("step piece without `:`"))?;
                    breaks.push(num(t)?);
                    values.push(num(v)?);
                }
                Self::step(breaks, values)
            }
            "grid" => Self::from_grid_csv(rest),
            other => Err(bad(&format!("unknown kind `{other}`"))),
        }
    }
}

/// Step envelopes of `beta` on the dyadic partition `i / 2^level` of `[0, 1]`.
///
/// On each cell the upper (lower) envelope takes the maximum (minimum) of
/// `beta` over a probe grid. Probes sit on the shared dyadic grid of mesh
/// `2^-16` for levels up to 10 and on `2^6` points per cell beyond, so the
/// envelopes of successive levels are nested on their common probe points.
pub fn monotone_envelopes(beta: &BetaFunction, level: u32) -> Result<(BetaFunction, BetaFunction)> {
    if level == 0 || level > 24 {
        return domain(format!("envelope level {level} outside 1..=24"));
    }
    if let Some(h) = beta.horizon() {
        if h < 1.0 - HORIZON_SLACK {
            return domain(format!("envelopes need beta on [0, 1], horizon is {h}"));
        }
    }
    let cells = 1usize << level;
    let probes = 1usize << PROBE_BITS.max(SHARED_PROBE_BITS.saturating_sub(level));
    let width = 1.0 / cells as f64;
    let mut breaks = Vec::with_capacity(cells);
    let mut upper = Vec::with_capacity(cells);
    let mut lower = Vec::with_capacity(cells);
    for i in 0..cells {
        let left = i as f64 * width;
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for k in 0..probes {
            let v = beta.eval(left + k as f64 * width / probes as f64)?;
            hi = hi.max(v);
            lo = lo.min(v);
        }
        breaks.push(left);
        upper.push(hi);
        lower.push(lo);
    }
    Ok((
        BetaFunction::step(breaks.clone(), upper)?,
        BetaFunction::step(breaks, lower)?,
    ))
}
