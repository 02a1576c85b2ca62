//! Globally adaptive composite Gauss–Legendre quadrature.
//!
//! The integration range is first cut at caller-supplied points (where the
//! integrand is not smooth). Each panel's error is estimated as the difference
//! between the rule on the whole panel and on its two halves; the panel with
//! the largest estimate is bisected until the total estimate meets
//! `max(abs_tol, rel_tol * |I|)`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    pub nodes_per_panel: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_panels: 2048,
            nodes_per_panel: 32,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return domain("quadrature tolerances must be positive");
        }
        if self.nodes_per_panel < 2 || self.max_panels == 0 {
            return domain("quadrature needs at least two nodes per panel and one panel");
        }
        Ok(())
    }
}

/// An integral value with its absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub abs_err: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, abs_err: 0.0 }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Self) -> Self {
        Self {
            value: self.value + rhs.value,
            abs_err: self.abs_err + rhs.abs_err,
        }
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            let w = 2.0 / ((1.0 - x * x) * d * d);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Shared rule for `n` nodes.
    pub fn cached(n: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
        map.entry(n).or_insert_with(|| Arc::new(Self::new(n))).clone()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn apply<F>(&self, f: &mut F, a: f64, b: f64) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x)?;
        }
        Ok(sum * half)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

struct Panel {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
}

impl Panel {
    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn make_panel<F>(rule: &GaussLegendre, f: &mut F, a: f64, b: f64, whole: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let left = rule.apply(f, a, m)?;
    let right = rule.apply(f, m, b)?;
    let err = (whole - (left + right)).abs();
    if !err.is_finite() {
        return Err(Error::Domain(format!(
            "integrand not finite on [{a:e}, {b:e}]"
        )));
    }
    Ok(Panel {
        a,
        b,
        left,
        right,
        err,
    })
}

/// Integrates a fallible `f` over `[points[0], points[last]]`, with the
/// integrand assumed smooth between consecutive `points`.
pub fn integrate<F>(mut f: F, points: &[f64], cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if points.len() < 2 || points.iter().any(|p| !p.is_finite()) {
        return domain("integration needs at least two finite points");
    }
    let rule = GaussLegendre::cached(cfg.nodes_per_panel);
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b < a {
            return domain("integration points must be ascending");
        }
        if b > a {
            let whole = rule.apply(&mut f, a, b)?;
            heap.push(make_panel(&rule, &mut f, a, b, whole)?);
        }
    }
    loop {
        let (value, err) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value(), e + p.err));
        if err <= cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
            return Ok(Estimate {
                value,
                abs_err: err,
            });
        }
        if heap.len() >= cfg.max_panels {
            return Err(Error::NotConverged {
                value,
                abs_err: err,
                panels: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is non-empty while error is positive");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // Panel cannot be split further in floating point.
            return Err(Error::NotConverged {
                value,
                abs_err: err,
                panels: heap.len() + 1,
            });
        }
        heap.push(make_panel(&rule, &mut f, worst.a, m, worst.left)?);
        heap.push(make_panel(&rule, &mut f, m, worst.b, worst.right)?);
    }
}

/// Infallible convenience wrapper around [`integrate`].
pub fn integrate_fn<F>(mut f: F, points: &[f64], cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    integrate(|x| Ok(f(x)), points, cfg)
}

/// Sorts and dedups a list of cut points and keeps those within `[a, b]`,
/// always including both ends.
pub fn cut_points(a: f64, b: f64, interior: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut pts: Vec<f64> = std::iter::once(a)
        .chain(interior.into_iter().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}
