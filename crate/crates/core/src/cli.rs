//! Command-line front end.
//!
//! ```text
//! wishart-sum marginal --params fig2.json --grid 0:80:400 -o fig2.csv
//! wishart-sum jpdf     --params fig1.json --grid 0:40:200 -o fig1.csv
//! wishart-sum sample   --params fig3.json --samples 100000 --seed 1 --bins auto -o hist.csv
//! wishart-sum compare  --params fig3.json --samples 100000 -o report.json
//! wishart-sum check    --params fig3.json
//! ```
//!
//! Exit codes: 0 success, 1 invalid input or usage, 2 numerical failure,
//! 3 failed `check` or `compare`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::analytic::{joint_grid, lambda_max, linspace, marginal_curve};
use crate::check::run_checks;
use crate::ensemble::EnsembleParams;
use crate::error::{Error, Result};
use crate::sampler::{compare, run, SampleConfig, SpectrumHistogram};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// `compare` passes when the chi-square p-value is at least this ...
pub const COMPARE_MIN_P: f64 = 1e-3;
/// ... and every residual is below this.
pub const COMPARE_MAX_RESIDUAL: f64 = 5.0;

/// Curve points per histogram bin when `compare` builds its own grid.
const COMPARE_POINTS_PER_BIN: usize = 8;
const DEFAULT_GRID_POINTS: usize = 400;
const DEFAULT_JOINT_POINTS: usize = 100;

/// Environment variable holding the log level (`error`, `info`, `debug`).
pub const LOG_ENV: &str = "WISHART_SUM_LOG";

/// Inclusive grid `min:max:points`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        if !(min >= 0.0) || !max.is_finite() {
            return Err(Error::Domain(format!("grid min must be >= 0 and max finite, got {min}:{max}")));
        }
        if !(max > min) {
            return Err(Error::Domain(format!("grid max must exceed min, got {min}:{max}")));
        }
        if points < 2 {
            return Err(Error::Domain(format!("grid needs at least 2 points, got {points}")));
        }
        Ok(GridSpec { min, max, points })
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.points)
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, points] = parts[..] else {
            return Err(Error::Parse(format!("grid must look like min:max:points, got {s:?}")));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad grid bound {t:?}")));
        let points = points.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad grid point count {points:?}")))?;
        GridSpec::new(num(min)?, num(max)?, points)
    }
}

/// `--bins N` or `--bins auto`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BinsSpec {
    #[default]
    Auto,
    Count(usize),
}

impl FromStr for BinsSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(BinsSpec::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(BinsSpec::Count(n)),
            _ => Err(Error::Parse(format!("--bins takes a positive integer or 'auto', got {s:?}"))),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "wishart-sum", version, about = "Eigenvalue densities of the sum of two complex Wishart matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Marginal eigenvalue density on a grid (CSV).
    Marginal(CurveArgs),
    /// Joint density of both eigenvalues on a square grid, n = 2 only (CSV).
    Jpdf(CurveArgs),
    /// Monte Carlo eigenvalue histogram (CSV).
    Sample(SampleArgs),
    /// Histogram against the analytic marginal (JSON report).
    Compare(CompareArgs),
    /// Self-test battery.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct ParamsArg {
    /// Parameter file {"n", "n_A", "n_B", "sigma_A", "sigma_B"}.
    #[arg(long)]
    params: PathBuf,
}

#[derive(Args, Debug)]
struct OutputArg {
    /// Output file; standard output when absent.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[command(flatten)]
    params: ParamsArg,
    /// Grid min:max:points (inclusive); defaults to [0, λ_max].
    #[arg(long, value_parser = parse_grid)]
    grid: Option<GridSpec>,
    #[command(flatten)]
    out: OutputArg,
}

#[derive(Args, Debug)]
struct SamplingArgs {
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
    /// Number of equal bins over [0, λ_max], or `auto`.
    #[arg(long, default_value = "auto", value_parser = parse_bins)]
    bins: BinsSpec,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    params: ParamsArg,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[command(flatten)]
    out: OutputArg,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    params: ParamsArg,
    #[command(flatten)]
    sampling: SamplingArgs,
    /// Grid for the analytic curve; defaults to 8 points per histogram bin.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<GridSpec>,
    #[command(flatten)]
    out: OutputArg,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    params: ParamsArg,
}

fn parse_grid(s: &str) -> std::result::Result<GridSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_bins(s: &str) -> std::result::Result<BinsSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Marginal,
    Jpdf,
    Sample,
    Compare,
    Check,
}

/// Everything one invocation needs, after parsing and validation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub command: CommandKind,
    pub params: EnsembleParams,
    pub config: Option<SampleConfig>,
    pub grid: Option<GridSpec>,
    pub output: Option<PathBuf>,
}

fn load_params(path: &Path) -> Result<EnsembleParams> {
    EnsembleParams::from_json_file(path).map_err(|e| match e {
        Error::Io(io) => Error::Parse(format!("cannot read {}: {io}", path.display())),
        other => other,
    })
}

fn sample_config(params: &EnsembleParams, s: &SamplingArgs) -> Result<SampleConfig> {
    let workers = s.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, usize::from));
    let edges = match s.bins {
        BinsSpec::Auto => None,
        BinsSpec::Count(n) => Some(linspace(0.0, lambda_max(params)?, n + 1)),
    };
    SampleConfig::new(s.samples, s.seed, workers, edges)
}

impl RunManifest {
    /// Parses `argv` (program name first). Help and version requests come
    /// back as `Err` with the clap error, as do usage errors.
    pub fn from_args<I, T>(argv: I) -> std::result::Result<Result<Self>, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(argv)?;
        Ok(Self::from_cli(cli))
    }

    fn from_cli(cli: Cli) -> Result<Self> {
        let m = |command, params, config, grid, output| RunManifest { command, params, config, grid, output };
        Ok(match cli.command {
            Command::Marginal(a) => m(CommandKind::Marginal, load_params(&a.params.params)?, None, a.grid, a.out.output),
            Command::Jpdf(a) => m(CommandKind::Jpdf, load_params(&a.params.params)?, None, a.grid, a.out.output),
            Command::Sample(a) => {
                let p = load_params(&a.params.params)?;
                let c = sample_config(&p, &a.sampling)?;
                m(CommandKind::Sample, p, Some(c), None, a.out.output)
            }
            Command::Compare(a) => {
                let p = load_params(&a.params.params)?;
                let c = sample_config(&p, &a.sampling)?;
                m(CommandKind::Compare, p, Some(c), a.grid, a.out.output)
            }
            Command::Check(a) => m(CommandKind::Check, load_params(&a.params.params)?, None, None, None),
        })
    }

    fn grid_or_default(&self, points: usize) -> Result<Vec<f64>> {
        match self.grid {
            Some(g) => Ok(g.points()),
            None => Ok(linspace(0.0, lambda_max(&self.params)?, points)),
        }
    }

    fn write_output(&self, stdout: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        match &self.output {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                body(&mut w)?;
                w.flush()?;
                log::info!("wrote {}", path.display());
                Ok(())
            }
            None => body(stdout),
        }
    }

    /// Runs the command and returns the exit code for a completed run:
    /// `EXIT_OK`, or `EXIT_CHECK_FAILED` when a check or comparison fails.
    pub fn execute(&self, stdout: &mut dyn Write) -> Result<i32> {
        log::info!("{:?} with {}", self.command, self.params);
        match self.command {
            CommandKind::Marginal => {
                let curve = marginal_curve(&self.params, &self.grid_or_default(DEFAULT_GRID_POINTS)?)?;
                self.write_output(stdout, |w| curve.write_csv(w))?;
                Ok(EXIT_OK)
            }
            CommandKind::Jpdf => {
                if self.params.n() != 2 {
                    return Err(Error::Dimension(format!("jpdf requires n=2, got n={}", self.params.n())));
                }
                let axis = self.grid_or_default(DEFAULT_JOINT_POINTS)?;
                let grid = joint_grid(&self.params, &axis, &axis)?;
                self.write_output(stdout, |w| grid.write_csv(w))?;
                Ok(EXIT_OK)
            }
            CommandKind::Sample => {
                let hist = self.histogram()?;
                self.write_output(stdout, |w| hist.write_csv(w))?;
                Ok(EXIT_OK)
            }
            CommandKind::Compare => {
                let hist = self.histogram()?;
                let grid = match self.grid {
                    Some(g) => g.points(),
                    None => refine(hist.edges(), COMPARE_POINTS_PER_BIN),
                };
                let curve = marginal_curve(&self.params, &grid)?;
                let report = compare(&hist, &curve);
                self.write_output(stdout, |w| Ok(writeln!(w, "{}", report.to_json())?))?;
                let passed = report.p_value >= COMPARE_MIN_P && report.max_abs_residual < COMPARE_MAX_RESIDUAL;
                log::info!(
                    "chi-square {:.2} on {} bins, p = {:.4}, max residual {:.3}",
                    report.chi_square,
                    report.dof,
                    report.p_value,
                    report.max_abs_residual
                );
                Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
            }
            CommandKind::Check => {
                let results = run_checks(&self.params);
                for r in &results {
                    writeln!(stdout, "{r}")?;
                }
                Ok(if results.iter().all(|r| r.passed) { EXIT_OK } else { EXIT_CHECK_FAILED })
            }
        }
    }

    fn histogram(&self) -> Result<SpectrumHistogram> {
        let config = self.config.as_ref().ok_or_else(|| Error::Domain("sampling configuration missing".into()))?;
        run(&self.params, config)
    }
}

/// `edges` with each interval split into `per_bin` equal pieces.
fn refine(edges: &[f64], per_bin: usize) -> Vec<f64> {
    let mut out: Vec<f64> = edges
        .windows(2)
        .flat_map(|w| (0..per_bin).map(move |k| w[0] + (w[1] - w[0]) * k as f64 / per_bin as f64))
        .collect();
    out.extend(edges.last());
    out
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_validation() || matches!(e, Error::Io(_)) {
        EXIT_VALIDATION
    } else {
        EXIT_NUMERICAL
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "error");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Runs the command line `argv` (program name first), writing results to
/// `stdout` and messages to `stderr`; returns the process exit code.
pub fn main_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let manifest = match RunManifest::from_args(argv) {
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{text}") } else { write!(stdout, "{text}") };
            return code;
        }
        Ok(Err(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
        Ok(Ok(m)) => m,
    };
    match manifest.execute(stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_syntax() {
        assert_eq!("0:80:400".parse::<GridSpec>().unwrap(), GridSpec { min: 0.0, max: 80.0, points: 400 });
        for bad in ["0:80", "-1:2:3", "2:1:3", "0:1:1", "a:1:3"] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn bins_syntax() {
        assert_eq!("auto".parse::<BinsSpec>().unwrap(), BinsSpec::Auto);
        assert_eq!("60".parse::<BinsSpec>().unwrap(), BinsSpec::Count(60));
        assert!("0".parse::<BinsSpec>().is_err());
    }

    #[test]
    fn refine_keeps_edges() {
        let r = refine(&[0.0, 1.0, 2.0], 4);
        assert_eq!(r.len(), 9);
        assert_eq!(r[4], 1.0);
        assert_eq!(r[8], 2.0);
    }
}
