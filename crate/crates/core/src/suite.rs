//! The shipped validation suites.
//!
//! Each suite runs a fixed set of checks from a [`SuiteConfig`] and returns
//! one [`TestReport`] per check. Every experiment draws from its own seed,
//! derived from the base seed and a fixed tag, so suites are reproducible
//! and independent of the order they run in.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::beta::{monotone_envelopes, BetaFunction};
use crate::density::{
    ck_residual, density_from_zero, fourier_from_zero, gaussian_kernel, normalization_residual,
};
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::laws::{
    arcsin_cdf, char_fn_zero, endpoint_triples, h_zero, half_normal_cdf, rayleigh_cdf,
};
use crate::parallel::map_indexed;
use crate::quadrature::QuadratureConfig;
use crate::rng::{derive_seed, PathStreams, RngStream};
use crate::simulate::{
    default_occupation_eps, last_zero, local_time_occupation, map_paths, smooth_sde_endpoint,
    ExcursionSkeleton, ExcursionSource,
};
use crate::validate::{
    conditional_sign_check, density_histogram_check, ks_one_sample, moment_scaling_check,
    two_sample_ks, TestReport,
};

pub const DEFAULT_SEED: u64 = 20_240_917;

const TAG_EXCURSION: u64 = 1;
const TAG_TRIPLES: u64 = 2;
const TAG_NORMALIZATION: u64 = 3;
const TAG_CK: u64 = 4;
const TAG_MOMENT: u64 = 5;
const TAG_ORDERING: u64 = 6;
const TAG_AGREEMENT_EXCURSION: u64 = 7;
const TAG_AGREEMENT_SDE: u64 = 8;

const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

/// Sizes, steps and tolerances of the suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Paths per simulated experiment.
    pub n_paths: u64,
    /// Step of the excursion-flip simulations.
    pub dt: f64,
    /// Step of the transformed-SDE simulation.
    pub sde_dt: f64,
    /// Exact endpoint draws for the trivariate law.
    pub n_triples: u64,
    /// Coupled pairs for the comparison principle.
    pub n_pairs: u64,
    pub histogram_bins: usize,
    pub sign_bins: usize,
    /// Occupation window half-width; defaults to `√dt`.
    pub occupation_eps: Option<f64>,
    pub p_threshold: f64,
    pub density_rel_tol: f64,
    pub normalization_tol: f64,
    pub ck_tol: f64,
    pub fourier_tol: f64,
    pub h_zero_tol: f64,
    pub local_time_bias: f64,
    pub moment_const: f64,
    pub quad: QuadratureConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            n_paths: 100_000,
            dt: 1e-3,
            sde_dt: 1e-4,
            n_triples: 1_000_000,
            n_pairs: 10_000,
            histogram_bins: 40,
            sign_bins: 20,
            occupation_eps: None,
            p_threshold: 1e-3,
            density_rel_tol: 1e-6,
            normalization_tol: 1e-6,
            ck_tol: 1e-5,
            fourier_tol: 1e-5,
            h_zero_tol: 1e-9,
            local_time_bias: 0.02,
            moment_const: 6.0,
            quad: QuadratureConfig::default(),
        }
    }
}

/// Smallest sample sizes at which the asymptotic tests are meaningful.
pub const MIN_PATHS: u64 = 10_000;
pub const MIN_TRIPLES: u64 = 10_000;
pub const MIN_PAIRS: u64 = 1_000;

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n_paths < MIN_PATHS {
            return bad(format!("n_paths = {} is below the minimum {MIN_PATHS}", self.n_paths));
        }
        if self.n_triples < MIN_TRIPLES {
            return bad(format!("n_triples = {} is below the minimum {MIN_TRIPLES}", self.n_triples));
        }
        if self.n_pairs < MIN_PAIRS {
            return bad(format!("n_pairs = {} is below the minimum {MIN_PAIRS}", self.n_pairs));
        }
        for (name, dt) in [("dt", self.dt), ("sde_dt", self.sde_dt)] {
            if !(dt > 0.0 && dt <= 0.01) || TimeGrid::with_step(1.0, dt).is_err() {
                return bad(format!("{name} = {dt} must divide 1 and lie in (0, 0.01]"));
            }
        }
        if self.histogram_bins < 2 || self.sign_bins < 1 {
            return bad("need at least two histogram bins and one sign bin".into());
        }
        if matches!(self.occupation_eps, Some(e) if !(e > 0.0)) {
            return bad("occupation_eps must be positive".into());
        }
        let tolerances = [
            self.p_threshold,
            self.density_rel_tol,
            self.normalization_tol,
            self.ck_tol,
            self.fourier_tol,
            self.h_zero_tol,
            self.local_time_bias,
            self.moment_const,
        ];
        if tolerances.iter().any(|t| !(*t > 0.0)) {
            return bad("tolerances must be positive".into());
        }
        self.quad.validate().map_err(|e| Error::Config(e.to_string()))
    }

    fn excursion_grid(&self) -> Result<TimeGrid> {
        TimeGrid::with_step(1.0, self.dt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Marginal,
    Sign,
    Ck,
    Moment,
    Ordering,
    Trivariate,
    Agreement,
    All,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Marginal,
        Suite::Sign,
        Suite::Ck,
        Suite::Moment,
        Suite::Ordering,
        Suite::Trivariate,
        Suite::Agreement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Marginal => "marginal",
            Suite::Sign => "sign",
            Suite::Ck => "ck",
            Suite::Moment => "moment",
            Suite::Ordering => "ordering",
            Suite::Trivariate => "trivariate",
            Suite::Agreement => "agreement",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

/// The endpoint law coefficient used by the marginal, sign and trivariate suites.
pub fn reference_step_beta() -> BetaFunction {
    BetaFunction::step(vec![0.0, 0.5], vec![0.8, -0.6]).expect("valid step")
}

/// Per-path reductions of the shared excursion-flip run at `t = 1`.
#[derive(Debug, Clone, Default)]
pub struct ExcursionRun {
    pub endpoint: Vec<f64>,
    pub last_zero: Vec<f64>,
    pub local_time: Vec<f64>,
    pub eps: f64,
}

impl ExcursionRun {
    pub fn simulate(beta: &BetaFunction, grid: TimeGrid, seed: u64, n: u64, eps: f64) -> Result<Self> {
        let t = grid.t_max();
        let src = ExcursionSource { beta: beta.clone(), grid, seed };
        let rows = map_paths(&src, n, |p| {
            Ok((
                *p.values.last().expect("non-empty path"),
                last_zero(p, t)?,
                local_time_occupation(p, t, eps)?,
            ))
        })?;
        let mut run = Self { eps, ..Self::default() };
        for (x, g, l) in rows {
            run.endpoint.push(x);
            run.last_zero.push(g);
            run.local_time.push(l);
        }
        Ok(run)
    }
}

/// Runs suites against one configuration, sharing the reference excursion
/// run between the suites that use it.
pub struct SuiteRunner {
    cfg: SuiteConfig,
    run: Option<ExcursionRun>,
}

impl SuiteRunner {
    pub fn new(cfg: SuiteConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { cfg, run: None })
    }

    pub fn config(&self) -> &SuiteConfig {
        &self.cfg
    }

    fn seed(&self, tag: u64) -> u64 {
        derive_seed(self.cfg.seed, tag)
    }

    /// The shared excursion-flip run for the reference step coefficient.
    pub fn excursion_run(&mut self) -> Result<&ExcursionRun> {
        if self.run.is_none() {
            let grid = self.cfg.excursion_grid()?;
            let eps = self.cfg.occupation_eps.unwrap_or_else(|| default_occupation_eps(self.cfg.dt));
            let seed = self.seed(TAG_EXCURSION);
            self.run = Some(ExcursionRun::simulate(
                &reference_step_beta(),
                grid,
                seed,
                self.cfg.n_paths,
                eps,
            )?);
        }
        Ok(self.run.as_ref().expect("just filled"))
    }

    /// Runs `suite`; every report carries the base seed, which reproduces it.
    pub fn run(&mut self, suite: Suite) -> Result<Vec<TestReport>> {
        let seed = self.cfg.seed;
        Ok(self.run_unseeded(suite)?.into_iter().map(|r| r.with_seed(seed)).collect())
    }

    fn run_unseeded(&mut self, suite: Suite) -> Result<Vec<TestReport>> {
        match suite {
            Suite::Marginal => self.marginal(),
            Suite::Sign => self.sign().map(|r| vec![r]),
            Suite::Ck => self.ck(),
            Suite::Moment => self.moment(),
            Suite::Ordering => self.ordering(),
            Suite::Trivariate => self.trivariate(),
            Suite::Agreement => self.agreement(),
            Suite::All => {
                let mut out = Vec::new();
                for s in Suite::ALL {
                    out.extend(self.run_unseeded(s)?);
                }
                Ok(out)
            }
        }
    }

    /// Closed-form density reductions, the endpoint laws of the simulated
    /// process, the characteristic function and the mean local time.
    pub fn marginal(&mut self) -> Result<Vec<TestReport>> {
        let mut out = vec![self.gaussian_reduction()?, self.constant_beta_closed_form()?];
        out.extend(self.endpoint_laws()?);
        out.extend(self.fourier()?);
        out.push(self.local_time_mean()?);
        Ok(out)
    }

    fn density_grid() -> impl Iterator<Item = (f64, f64)> {
        (0..10).flat_map(|i| {
            let t = 0.1 + 1.9 * i as f64 / 9.0;
            (0..21).map(move |j| (t, -3.0 + 0.3 * j as f64))
        })
    }

    fn max_rel_error(&self, beta: &BetaFunction, factor: impl Fn(f64) -> f64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (t, y) in Self::density_grid() {
            let exact = factor(y) * gaussian_kernel(t, 0.0, y)?;
            let p = density_from_zero(beta, t, y, &self.cfg.quad)?;
            worst = worst.max((p - exact).abs() / gaussian_kernel(t, 0.0, y)?);
        }
        Ok(worst)
    }

    pub fn gaussian_reduction(&self) -> Result<TestReport> {
        let beta = BetaFunction::constant(0.0)?;
        let err = self.max_rel_error(&beta, |_| 1.0)?;
        Ok(TestReport::residual("gaussian_reduction", err, err, self.cfg.density_rel_tol, 210))
    }

    pub fn constant_beta_closed_form(&self) -> Result<TestReport> {
        let mut worst: f64 = 0.0;
        for b in [-0.9, -0.5, 0.5, 0.9] {
            let beta = BetaFunction::constant(b)?;
            let sgn = |y: f64| if y > 0.0 { 1.0 } else if y < 0.0 { -1.0 } else { 0.0 };
            worst = worst.max(self.max_rel_error(&beta, |y| 1.0 + sgn(y) * b)?);
        }
        Ok(TestReport::residual(
            "constant_beta_closed_form",
            worst,
            worst,
            self.cfg.density_rel_tol,
            840,
        ))
    }

    fn endpoint_laws(&mut self) -> Result<Vec<TestReport>> {
        let (p, bins, quad) = (self.cfg.p_threshold, self.cfg.histogram_bins, self.cfg.quad);
        let beta = reference_step_beta();
        let run = self.excursion_run()?;
        let hist = density_histogram_check(
            &run.endpoint,
            |y| density_from_zero(&beta, 1.0, y, &quad),
            bins,
            (-4.0, 4.0),
        )?
        .named("endpoint_density_histogram");
        let modulus: Vec<f64> = run.endpoint.iter().map(|x| x.abs()).collect();
        let half_normal = ks_one_sample(&modulus, |x| half_normal_cdf(x, 1.0))?
            .named("endpoint_modulus_half_normal")
            .with_threshold(p);
        let arcsine = ks_one_sample(&run.last_zero, |g| arcsin_cdf(g.clamp(0.0, 1.0)).unwrap_or(1.0))?
            .named("last_zero_arcsine")
            .with_threshold(p);
        Ok(vec![hist, half_normal, arcsine])
    }

    fn fourier(&self) -> Result<Vec<TestReport>> {
        let quad = &self.cfg.quad;
        let beta = BetaFunction::constant(0.5)?;
        let mut worst: f64 = 0.0;
        for lambda in [0.5, 1.0, 2.0] {
            let closed = char_fn_zero(&beta, 1.0, lambda, quad)?;
            let numeric = fourier_from_zero(&beta, 1.0, lambda, quad)?;
            worst = worst.max((closed.re - numeric.re).abs()).max((closed.im - numeric.im).abs());
        }
        let one = BetaFunction::constant(1.0)?;
        let h = h_zero(&one, 1.0, quad)?;
        let h_err = (h - SQRT_2_OVER_PI).abs();
        Ok(vec![
            TestReport::residual("fourier_consistency", worst, worst, self.cfg.fourier_tol, 3),
            TestReport::residual("local_time_integral_unit_beta", h, h_err, self.cfg.h_zero_tol, 1),
        ])
    }

    fn local_time_mean(&mut self) -> Result<TestReport> {
        let allowance = self.cfg.local_time_bias;
        let run = self.excursion_run()?;
        let n = run.local_time.len() as f64;
        let mean = run.local_time.iter().sum::<f64>() / n;
        let var = run.local_time.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let tol = (3.0 * (var / n).sqrt()).max(allowance);
        Ok(TestReport::residual("local_time_mean", mean, (mean - SQRT_2_OVER_PI).abs(), tol, n as u64))
    }

    /// Mean sign of the endpoint given the last zero.
    pub fn sign(&mut self) -> Result<TestReport> {
        let bins = self.cfg.sign_bins;
        let run = self.excursion_run()?;
        let pairs: Vec<(f64, f64)> = run
            .last_zero
            .iter()
            .zip(&run.endpoint)
            .map(|(&g, &x)| (g, if x > 0.0 { 1.0 } else if x < 0.0 { -1.0 } else { 0.0 }))
            .collect();
        conditional_sign_check(&pairs, &reference_step_beta(), bins)
    }

    /// Normalization and Chapman–Kolmogorov residuals of the density for
    /// random step coefficients.
    pub fn ck(&self) -> Result<Vec<TestReport>> {
        let quad = &self.cfg.quad;
        let mut out = Vec::new();
        let seed = self.seed(TAG_NORMALIZATION);
        let mut rng = RngStream::new(seed, 0);
        for k in 0..20 {
            let beta = random_step(&mut rng, 2.0)?;
            let s = rng.random_range(0.0..0.5);
            let t = s + rng.random_range(0.05..1.5);
            let x = rng.random_range(-1.5..1.5);
            let r = normalization_residual(&beta, s, t, x, quad)?;
            out.push(
                TestReport::residual(format!("normalization[{k}]"), r, r, self.cfg.normalization_tol, 1),
            );
        }
        let seed = self.seed(TAG_CK);
        let mut rng = RngStream::new(seed, 0);
        for k in 0..10 {
            let s = rng.random_range(0.0..0.5);
            let t = s + rng.random_range(0.1..0.6);
            let v = t + rng.random_range(0.1..0.6);
            let x = rng.random_range(-1.0..1.0);
            let z = rng.random_range(-1.0..1.0);
            let beta = if k == 0 {
                // intermediate time exactly at a jump
                BetaFunction::step(
                    vec![0.0, t, v + 0.1],
                    (0..3).map(|_| rng.random_range(-1.0..=1.0)).collect(),
                )?
            } else {
                random_step(&mut rng, 2.0)?
            };
            let r = ck_residual(&beta, s, t, v, x, z, quad)?;
            out.push(
                TestReport::residual(format!("chapman_kolmogorov[{k}]"), r, r, self.cfg.ck_tol, 1),
            );
        }
        Ok(out)
    }

    /// Fourth moments of increments for `β ≡ 0` and `β ≡ 0.9`.
    pub fn moment(&self) -> Result<Vec<TestReport>> {
        let dt = self.cfg.dt;
        let steps = (0.35 / dt).ceil() as usize;
        let grid = TimeGrid::new(steps as f64 * dt, steps)?;
        let eps = [0.01, 0.02, 0.05];
        let mut out = Vec::new();
        for (k, (name, b)) in [("moment_scaling_beta_0", 0.0), ("moment_scaling_beta_0.9", 0.9)]
            .into_iter()
            .enumerate()
        {
            let src = ExcursionSource {
                beta: BetaFunction::step(vec![0.0], vec![b])?,
                grid,
                seed: derive_seed(self.seed(TAG_MOMENT), k as u64),
            };
            out.push(
                moment_scaling_check(&src, 0.3, &eps, self.cfg.n_paths, self.cfg.moment_const)?
                    .named(name),
            );
        }
        Ok(out)
    }

    /// Coupled paths at the step envelopes of `β(t) = 0.8t - 0.4`.
    ///
    /// Checks that lower-envelope paths never exceed upper-envelope paths
    /// and that finer envelopes sit between coarser ones, at every grid
    /// point of every pair; and that the mean sup-distance between the paths
    /// of successive levels shrinks from levels (2, 4) to (4, 6).
    pub fn ordering(&self) -> Result<Vec<TestReport>> {
        let grid = self.cfg.excursion_grid()?;
        let beta = BetaFunction::smooth_fn(1.0, 1001, |t| 0.8 * t - 0.4)?;
        let envelopes = [2, 4, 6]
            .into_iter()
            .map(|m| monotone_envelopes(&beta, m))
            .collect::<Result<Vec<_>>>()?;
        let seed = self.seed(TAG_ORDERING);
        let rows = map_indexed(self.cfg.n_pairs, |i| -> Result<(u64, f64, f64)> {
            let skeleton = ExcursionSkeleton::sample(grid, &mut PathStreams::new(seed, i));
            let paths = envelopes
                .iter()
                .map(|(upper, lower)| Ok((skeleton.apply(upper)?.values, skeleton.apply(lower)?.values)))
                .collect::<Result<Vec<_>>>()?;
            let mut violations = 0;
            for (up, lo) in &paths {
                violations += up.iter().zip(lo).filter(|(u, l)| l > u).count() as u64;
            }
            for w in paths.windows(2) {
                let ((up_c, lo_c), (up_f, lo_f)) = (&w[0], &w[1]);
                violations += up_f.iter().zip(up_c).filter(|(f, c)| f > c).count() as u64;
                violations += lo_c.iter().zip(lo_f).filter(|(c, f)| c > f).count() as u64;
            }
            let sup = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            let dist = |c: usize| {
                0.5 * (sup(&paths[c].0, &paths[c + 1].0) + sup(&paths[c].1, &paths[c + 1].1))
            };
            Ok((violations, dist(0), dist(1)))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let n = rows.len() as f64;
        let violations: u64 = rows.iter().map(|r| r.0).sum();
        let d24 = rows.iter().map(|r| r.1).sum::<f64>() / n;
        let d46 = rows.iter().map(|r| r.2).sum::<f64>() / n;
        Ok(vec![
            TestReport::residual("comparison_ordering", violations as f64, violations as f64, 0.0, rows.len() as u64),
            // ratio of the (4, 6) to the (2, 4) mean distance
            TestReport::residual("envelope_convergence", d24, d46 / d24, 1.0, rows.len() as u64),
        ])
    }

    /// Exact endpoint draws against their marginal laws and against the
    /// simulated endpoint.
    pub fn trivariate(&mut self) -> Result<Vec<TestReport>> {
        let p = self.cfg.p_threshold;
        let seed = self.seed(TAG_TRIPLES);
        let triples = endpoint_triples(&reference_step_beta(), 1.0, seed, self.cfg.n_triples)?;
        let g: Vec<f64> = triples.iter().map(|x| x.g).collect();
        let l: Vec<f64> = triples.iter().map(|x| x.normalized_local_time()).collect();
        let b: Vec<f64> = triples.iter().map(|x| x.b).collect();
        let arcsine = ks_one_sample(&g, |u| arcsin_cdf(u.clamp(0.0, 1.0)).unwrap_or(1.0))?
            .named("triple_last_zero_arcsine");
        let rayleigh = ks_one_sample(&l, |x| rayleigh_cdf(x.max(0.0)).unwrap_or(0.0))?
            .named("triple_local_time_rayleigh");
        let run = self.excursion_run()?;
        let agree = two_sample_ks(&b, &run.endpoint)?.named("triple_endpoint_vs_simulation");
        Ok([arcsine, rayleigh, agree]
            .into_iter()
            .map(|r| r.with_threshold(p))
            .collect())
    }

    /// Excursion flipping against the transformed SDE for `β ≡ 0.6`.
    pub fn agreement(&self) -> Result<Vec<TestReport>> {
        let p = self.cfg.p_threshold;
        let beta = BetaFunction::constant(0.6)?;
        let n = self.cfg.n_paths;
        let exc_seed = self.seed(TAG_AGREEMENT_EXCURSION);
        let src = ExcursionSource { beta: beta.clone(), grid: self.cfg.excursion_grid()?, seed: exc_seed };
        let exc = map_paths(&src, n, |p| Ok(*p.values.last().expect("non-empty path")))?;
        let sde_seed = self.seed(TAG_AGREEMENT_SDE);
        let sde_grid = TimeGrid::with_step(1.0, self.cfg.sde_dt)?;
        let sde = map_indexed(n, |i| {
            smooth_sde_endpoint(&beta, sde_grid, 0.0, &mut PathStreams::new(sde_seed, i))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

        let ks = two_sample_ks(&exc, &sde)?
            .named("simulator_agreement")
            .with_threshold(p);
        let expected = 0.8;
        let tol = 3.0 * (expected * (1.0 - expected) / n as f64).sqrt();
        let mass = |name: &str, x: &[f64]| {
            let frac = x.iter().filter(|v| **v > 0.0).count() as f64 / x.len() as f64;
            TestReport::residual(name, frac, (frac - expected).abs(), tol, x.len() as u64)
        };
        Ok(vec![
            ks,
            mass("positive_mass_excursion", &exc),
            mass("positive_mass_sde", &sde),
        ])
    }
}

/// A step function on `[0, horizon)` with one to three random interior
/// jumps and values uniform in `[-1, 1]`.
fn random_step(rng: &mut RngStream, horizon: f64) -> Result<BetaFunction> {
    let k = rng.random_range(1..=3);
    let mut breaks: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..horizon)).collect();
    breaks.push(0.0);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let values = breaks.iter().map(|_| rng.random_range(-1.0..=1.0)).collect();
    BetaFunction::step(breaks, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_minimums() {
        let cfg = SuiteConfig::default();
        assert!(cfg.validate().is_ok());
        let small: SuiteConfig = serde_json::from_str(r#"{"n_paths": 10}"#).unwrap();
        assert!(matches!(small.validate(), Err(Error::Config(_))));
        assert!(serde_json::from_str::<SuiteConfig>(r#"{"bogus": 1}"#).is_err());
        let bad_dt = SuiteConfig { dt: 0.3, ..SuiteConfig::default() };
        assert!(bad_dt.validate().is_err());
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn random_steps_are_valid() {
        let mut rng = RngStream::new(1, 0);
        for _ in 0..100 {
            let b = random_step(&mut rng, 2.0).unwrap();
            assert!(b.sup_abs() <= 1.0);
        }
    }
}
