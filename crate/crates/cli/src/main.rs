#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use iskew::density::{transition_density_estimate, DensityQuery};
use iskew::laws::endpoint_triples;
use iskew::parallel::{configure_threads, map_indexed};
use iskew::rng::PathStreams;
use iskew::simulate::{excursion_flip_path, smooth_sde_path};
use iskew::suite::{Suite, SuiteConfig, SuiteRunner};
use iskew::{BetaFunction, Error, QuadratureConfig, SamplePath, TimeGrid};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_QUADRATURE: u8 = 3;

/// Paths generated per batch while streaming simulation output.
const PATH_BATCH: u64 = 256;

const BETA_HELP: &str = "Skewness coefficient: `const:<v>`, `step:<t0>:<v0>,<t1>:<v1>,...` \
(first break at 0, right-continuous) or `grid:<file.csv>` (header `t,beta`, uniform times, \
cubic interpolation)";

#[derive(Parser)]
#[command(
    name = "iskew",
    version,
    about = "Skew Brownian motion with time-dependent skewness: densities, samplers, simulators and validation",
    after_help = "Set ISKEW_THREADS to cap the number of worker threads."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    Density(DensityArgs),
    Sample(SampleArgs),
    Simulate(SimulateArgs),
    Validate(ValidateArgs),
}

/// Evaluate the transition density p(s, t; x, y) and print CSV rows
/// `s,t,x,y,p,err_estimate`.
///
/// Exits with 3 if the quadrature misses its tolerance for some row; such
/// rows are still printed with the achieved error estimate.
#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct DensityArgs {
    #[arg(long, help = BETA_HELP)]
    beta: BetaFunction,
    /// Start time.
    #[arg(long, default_value_t = 0.0)]
    s: f64,
    /// End time.
    #[arg(long)]
    t: f64,
    /// Start point.
    #[arg(long, default_value_t = 0.0)]
    x: f64,
    /// Single end point.
    #[arg(long, conflicts_with = "y_grid", required_unless_present = "y_grid")]
    y: Option<f64>,
    /// Equally spaced end points `min:max:n`.
    #[arg(long, allow_hyphen_values = true)]
    y_grid: Option<YGrid>,
    /// Relative tolerance of the adaptive quadrature.
    #[arg(long)]
    rel_tol: Option<f64>,
}

#[derive(Clone)]
struct YGrid {
    min: f64,
    max: f64,
    n: usize,
}

impl std::str::FromStr for YGrid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, n] = parts[..] else {
            return Err(format!("expected min:max:n, got `{s}`"));
        };
        let num = |v: &str| v.parse::<f64>().map_err(|_| format!("bad number `{v}`"));
        let grid = YGrid {
            min: num(min)?,
            max: num(max)?,
            n: n.parse().map_err(|_| format!("bad count `{n}`"))?,
        };
        if grid.n == 0 || !(grid.max >= grid.min) {
            return Err(format!("need n >= 1 and max >= min in `{s}`"));
        }
        Ok(grid)
    }
}

impl YGrid {
    fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.min + i as f64 * h).collect()
    }
}

/// Draw exact (last zero, local time, position) triples at time t for the
/// process started at zero, printed as CSV `g,l,b`.
#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SampleArgs {
    #[arg(long, help = BETA_HELP)]
    beta: BetaFunction,
    #[arg(long)]
    t: f64,
    /// Number of draws.
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = iskew::suite::DEFAULT_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Method {
    /// Excursion flipping of a driving Brownian motion; step or constant beta, start at 0.
    Excursion,
    /// Euler scheme for the space-transformed SDE; constant or grid beta.
    Sde,
}

/// Simulate paths and write them as long CSV `path_id,time,value`, plus a
/// sidecar `<out>.json` describing the run.
#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long, help = BETA_HELP)]
    beta: String,
    #[arg(long)]
    n_paths: u64,
    #[arg(long)]
    dt: f64,
    #[arg(long)]
    t_max: f64,
    #[arg(long, default_value_t = iskew::suite::DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Start point; the excursion method only starts at 0.
    #[arg(long)]
    x0: Option<f64>,
    /// Keep every stride-th grid point.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    stride: u64,
}

/// Run a validation suite and print one JSON report per check.
///
/// Exits with 0 if every check passes, 1 if any fails and 2 on a
/// configuration error.
#[derive(Args)]
#[command(after_long_help = SUITE_HELP)]
struct ValidateArgs {
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    /// Base seed; overrides the configuration.
    #[arg(long, conflicts_with = "fresh_seed")]
    seed: Option<u64>,
    /// Inline JSON object or path to a JSON file overriding sizes, steps and tolerances.
    #[arg(long)]
    config: Option<String>,
    /// Draw a new base seed from the operating system; it is recorded in every report.
    #[arg(long)]
    fresh_seed: bool,
}

const SUITE_HELP: &str = "\
Suites:
  marginal    density reduces to the Gaussian kernel for beta = 0 and to the
              closed form (1 + sgn(y) beta) x Gaussian for constant beta;
              simulated endpoint against the density (histogram), |X_1| against
              the half-normal law, last zero against the arcsine law;
              characteristic function against the Fourier transform of the
              density; mean local time against sqrt(2/pi)
  sign        mean sign of X_1 given the last zero G_1 equals beta(G_1)
  ck          density integrates to one and satisfies Chapman-Kolmogorov,
              including at a jump of beta
  moment      E|X_{t+e} - X_t|^4 <= 6 e^2 (with 10% slack)
  ordering    comparison principle: coupled paths are ordered like their
              coefficients; paths at finer step envelopes get closer
  trivariate  exact (last zero, local time, position) sampler: arcsine and
              Rayleigh marginals, position against the simulated endpoint
  agreement   excursion flipping and the transformed SDE give the same law
              of X_1 for constant beta = 0.6, with P(X_1 > 0) = 0.8
  all         every suite above

Config keys (all optional): seed, n_paths, dt, sde_dt, n_triples, n_pairs,
histogram_bins, sign_bins, occupation_eps, p_threshold, density_rel_tol,
normalization_tol, ck_tol, fourier_tol, h_zero_tol, local_time_bias,
moment_const, quad {rel_tol, abs_tol, max_panels, nodes_per_panel}.";

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotConverged { .. } => EXIT_QUADRATURE,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::from(e).into()
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("ISKEW_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = configure_threads(n) {
                    eprintln!("iskew: could not set thread count: {e}");
                }
            }
            _ => {
                eprintln!("iskew: ISKEW_THREADS must be a positive integer, got `{v}`");
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    let result = match cli.command {
        Command::Density(a) => density(a),
        Command::Sample(a) => sample(a),
        Command::Simulate(a) => simulate(a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("iskew: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn density(a: DensityArgs) -> Result<u8, Failure> {
    let mut quad = QuadratureConfig::default();
    if let Some(r) = a.rel_tol {
        quad.rel_tol = r;
    }
    let ys = match (&a.y, &a.y_grid) {
        (Some(y), _) => vec![*y],
        (None, Some(g)) => g.points(),
        (None, None) => unreachable!("clap requires --y or --y-grid"),
    };
    let rows = map_indexed(ys.len() as u64, |i| {
        let q = DensityQuery::new(&a.beta, a.s, a.t, a.x, ys[i as usize]).with_quad(quad);
        transition_density_estimate(&q)
    });
    let mut out = csv::Writer::from_writer(io::stdout().lock());
    out.write_record(["s", "t", "x", "y", "p", "err_estimate"])?;
    let mut code = 0;
    for (y, row) in ys.iter().zip(rows) {
        let (p, err) = match row {
            Ok(e) => (e.value, e.abs_err),
            Err(Error::NotConverged { value, abs_err, .. }) => {
                code = EXIT_QUADRATURE;
                (value, abs_err)
            }
            Err(e) => return Err(e.into()),
        };
        out.serialize((a.s, a.t, a.x, y, p, err))?;
    }
    out.flush()?;
    if code != 0 {
        eprintln!("iskew: quadrature tolerance not met for some rows");
    }
    Ok(code)
}

fn sample(a: SampleArgs) -> Result<u8, Failure> {
    let triples = endpoint_triples(&a.beta, a.t, a.seed, a.n)?;
    let mut out = csv::Writer::from_writer(BufWriter::new(io::stdout().lock()));
    out.write_record(["g", "l", "b"])?;
    for x in triples {
        out.serialize((x.g, x.l, x.b))?;
    }
    out.flush()?;
    Ok(0)
}

#[derive(Serialize)]
struct Sidecar<'a> {
    seed: u64,
    method: Method,
    beta: &'a str,
    dt: f64,
    t_max: f64,
    n_paths: u64,
    x0: f64,
    stride: u64,
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

fn simulate(a: SimulateArgs) -> Result<u8, Failure> {
    let beta: BetaFunction = a.beta.parse()?;
    let grid = TimeGrid::with_step(a.t_max, a.dt)?;
    let x0 = a.x0.unwrap_or(0.0);
    if matches!(a.method, Method::Excursion) && x0 != 0.0 {
        return Err(Error::Domain("the excursion method starts at 0; use --method sde for --x0".into()).into());
    }
    let one = |i: u64| -> iskew::Result<SamplePath> {
        let mut streams = PathStreams::new(a.seed, i);
        match a.method {
            Method::Excursion => excursion_flip_path(&beta, grid, &mut streams),
            Method::Sde => smooth_sde_path(&beta, grid, x0, &mut streams),
        }
    };
    // fail on incompatible inputs before creating any file
    one(0)?;

    let mut out = csv::Writer::from_writer(BufWriter::new(File::create(&a.out)?));
    out.write_record(["path_id", "time", "value"])?;
    let mut start = 0;
    while start < a.n_paths {
        let len = PATH_BATCH.min(a.n_paths - start);
        for (k, path) in map_indexed(len, |k| one(start + k)).into_iter().enumerate() {
            let path = path?;
            let id = start + k as u64;
            for i in (0..path.values.len()).step_by(a.stride as usize) {
                out.serialize((id, grid.time(i), path.values[i]))?;
            }
        }
        start += len;
    }
    out.flush()?;

    let sidecar = Sidecar {
        seed: a.seed,
        method: a.method,
        beta: &a.beta,
        dt: a.dt,
        t_max: a.t_max,
        n_paths: a.n_paths,
        x0,
        stride: a.stride,
    };
    let mut f = BufWriter::new(File::create(sidecar_path(&a.out))?);
    serde_json::to_writer_pretty(&mut f, &sidecar).map_err(io::Error::from)?;
    writeln!(f)?;
    f.flush()?;
    Ok(0)
}

fn load_config(raw: Option<&str>) -> Result<SuiteConfig, Failure> {
    let Some(raw) = raw else {
        return Ok(SuiteConfig::default());
    };
    let text = if raw.trim_start().starts_with('{') {
        raw.to_owned()
    } else {
        std::fs::read_to_string(raw).map_err(|e| Error::Config(format!("{raw}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()).into())
}

fn validate(a: ValidateArgs) -> Result<u8, Failure> {
    let mut cfg = load_config(a.config.as_deref())?;
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    } else if a.fresh_seed {
        cfg.seed = rand::random();
    }
    let mut runner = SuiteRunner::new(cfg)?;
    let reports = runner.run(a.suite)?;
    let mut out = io::stdout().lock();
    for r in &reports {
        serde_json::to_writer(&mut out, r).map_err(io::Error::from)?;
        writeln!(out)?;
    }
    out.flush()?;
    Ok(if reports.iter().all(|r| r.passed) { 0 } else { EXIT_FAILED })
}
