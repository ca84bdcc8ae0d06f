//! Command-line front end. Every subcommand writes CSV.

mod csv;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::averages::{
    average_bloch, time_average_closed_general, time_average_closed_resonant, time_average_limits,
    time_average_numeric,
};
use crate::bloch::{trajectory, uniform_grid, BlochVector};
use crate::entanglement::entanglement_lower_bound;
use crate::error::JcmError;
use crate::params::{ModelParams, TruncationPolicy};
use crate::sampling::{
    arcsine_density, arcsine_l1_distance, build_histogram, fit_arcsine_amplitude,
    fit_arcsine_amplitude_interior, fit_normal, log_grid, normal_density, power_law_fit,
    sample_moments, sample_series, sample_skewness, variance_scan,
};

pub use csv::{format_value, CsvWriter};
pub use verify::{run_checks, CheckOutcome, CheckSet, VerifyOptions};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] JcmError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    /// 0 success, 1 computation-domain error, 2 usage error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) | CliError::ChecksFailed(_) => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "jcm",
    version,
    about = "Thermal Jaynes-Cummings Bloch-vector experiments, emitted as CSV"
)]
pub struct Cli {
    /// Series truncation, `fixed:N` or `adaptive:EPS`. Each subcommand has its own default.
    #[arg(long, global = true, value_parser = parse_truncation)]
    pub truncation: Option<TruncationPolicy>,

    /// Digits after the decimal point in CSV output.
    #[arg(long, global = true, default_value_t = 12)]
    pub precision: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bloch-vector trajectory S(t) on a uniform grid.
    Trajectory(TrajectoryArgs),
    /// Time-averaged map coefficients, closed form and optionally numeric.
    Average(AverageArgs),
    /// Histogram of S_z(n dt) with an arcsine or normal density fit.
    Histogram(HistogramArgs),
    /// Sample variance of S_z against beta, with a power-law fit.
    VarianceScan(VarianceScanArgs),
    /// Lower bound on the atom-field entanglement of formation.
    Entanglement(EntanglementArgs),
    /// Run the oracle and invariant checks and report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Detuning omega - omega0.
    #[arg(
        long = "delta-omega",
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    pub delta_omega: f64,
    /// Coupling constant g.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub g: f64,
    /// Atomic transition frequency.
    #[arg(long, default_value_t = 1.0)]
    pub omega0: f64,
}

impl ModelArgs {
    fn params(&self, beta: f64, truncation: TruncationPolicy) -> CliResult<ModelParams> {
        Ok(ModelParams::detuned(
            beta,
            self.omega0,
            self.delta_omega,
            self.g,
            truncation,
        )?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TrajectoryArgs {
    #[arg(long, default_value_t = 0.5, value_parser = non_negative)]
    pub beta: f64,
    /// Initial Bloch vector `sx,sy,sz`.
    #[arg(long, default_value = "1,0,0", value_parser = parse_bloch, allow_hyphen_values = true)]
    pub s0: BlochVector,
    #[arg(long = "t-max", default_value_t = 100.0, value_parser = non_negative)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.01, value_parser = positive)]
    pub dt: f64,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AverageArgs {
    /// Comma-separated inverse temperatures.
    #[arg(long, default_value = "0.01,0.1,0.5,1,2,5,10", value_parser = float_list)]
    pub beta: FloatList,
    /// Emit the beta -> infinity limit instead of a grid.
    #[arg(long = "beta-inf")]
    pub beta_inf: bool,
    /// Add a finite-time trapezoidal average and its deviation.
    #[arg(long = "numeric-check")]
    pub numeric_check: bool,
    #[arg(long, default_value = "0,0,0", value_parser = parse_bloch, allow_hyphen_values = true)]
    pub s0: BlochVector,
    #[arg(long = "t-max", default_value_t = 2000.0, value_parser = positive)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.05, value_parser = positive)]
    pub dt: f64,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FitKind {
    Arcsine,
    Normal,
    None,
}

#[derive(Debug, Clone, Args)]
pub struct HistogramArgs {
    #[arg(long, default_value_t = 10.0, value_parser = non_negative)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.05, value_parser = positive)]
    pub dt: f64,
    /// Number of samples N + 1.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long = "class-interval", default_value_t = 0.005, value_parser = positive)]
    pub class_interval: f64,
    #[arg(long, value_enum, default_value_t = FitKind::Arcsine)]
    pub fit: FitKind,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Fit-curve file; defaults to `<output>_fit.csv` when `--output` is set.
    #[arg(long = "fit-output")]
    pub fit_output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VarianceScanArgs {
    /// Explicit beta grid; overrides the log grid.
    #[arg(long, value_parser = float_list)]
    pub betas: Option<FloatList>,
    #[arg(long = "beta-min", default_value_t = 0.01, value_parser = positive)]
    pub beta_min: f64,
    #[arg(long = "beta-max", default_value_t = 10.0, value_parser = positive)]
    pub beta_max: f64,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub points: u64,
    #[arg(long, default_value_t = 0.05, value_parser = positive)]
    pub dt: f64,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    /// Power-law fit window `lo:hi`, or `none`.
    #[arg(long = "fit-range", default_value = "0.01:0.1", value_parser = fit_window)]
    pub fit_range: FitWindow,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EntanglementArgs {
    #[arg(long, default_value = "10,2,1", value_parser = float_list)]
    pub beta: FloatList,
    #[arg(long = "t-max", default_value_t = std::f64::consts::TAU, value_parser = non_negative)]
    pub t_max: f64,
    /// Grid points on [0, t-max], endpoints included.
    #[arg(long, default_value_t = 600, value_parser = clap::value_parser!(u64).range(1..))]
    pub points: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Comma-separated subsets: all, oracle, series, averages, sampling, entanglement.
    #[arg(long, default_value = "all")]
    pub checks: String,
    /// Fock dimension for the oracle; chosen from the thermal tail when omitted.
    #[arg(long = "fock-dim")]
    pub fock_dim: Option<usize>,
    /// Restrict oracle checks to this inverse temperature.
    #[arg(long, value_parser = positive)]
    pub beta: Option<f64>,
    /// Seed for the randomized cases.
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
}

fn parse_truncation(s: &str) -> std::result::Result<TruncationPolicy, String> {
    s.parse().map_err(|e: JcmError| e.to_string())
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|e| format!("`{s}` is not a number: {e}"))?;
    if v.is_nan() {
        return Err("NaN is not allowed".into());
    }
    Ok(v)
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be a finite number > 0, got {v}"))
    }
}

fn non_negative(s: &str) -> std::result::Result<f64, String> {
    let v = parse_f64(s)?;
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be a finite number >= 0, got {v}"))
    }
}

/// Comma-separated numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatList(pub Vec<f64>);

/// Power-law fit window, `None` when disabled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWindow(pub Option<(f64, f64)>);

fn float_list(s: &str) -> std::result::Result<FloatList, String> {
    parse_list(s).map(FloatList)
}

fn fit_window(s: &str) -> std::result::Result<FitWindow, String> {
    parse_range(s).map(FitWindow)
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    let values: Vec<f64> = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(parse_f64)
        .collect::<std::result::Result<_, _>>()?;
    if values.is_empty() {
        return Err("empty list".into());
    }
    Ok(values)
}

fn parse_bloch(s: &str) -> std::result::Result<BlochVector, String> {
    let v = parse_list(s)?;
    if v.len() != 3 {
        return Err(format!(
            "expected three components `sx,sy,sz`, got {}",
            v.len()
        ));
    }
    BlochVector::checked(v[0], v[1], v[2]).map_err(|e| e.to_string())
}

fn parse_range(s: &str) -> std::result::Result<Option<(f64, f64)>, String> {
    if s.trim().eq_ignore_ascii_case("none") {
        return Ok(None);
    }
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected `lo:hi`, got `{s}`"))?;
    let (lo, hi) = (positive(lo)?, positive(hi)?);
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok(Some((lo, hi)))
}

fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Runs a parsed command line. Standard output receives the `verify` report.
pub fn run(cli: Cli) -> CliResult<()> {
    let stdout = io::stdout();
    let mut report = stdout.lock();
    run_with_report(cli, &mut report)
}

pub fn run_with_report(cli: Cli, report: &mut dyn Write) -> CliResult<()> {
    let Cli {
        truncation,
        precision,
        command,
    } = cli;
    match command {
        Command::Trajectory(a) => {
            let mut w = CsvWriter::new(open_output(a.out.output.as_deref())?, precision);
            cmd_trajectory(
                &a,
                truncation.unwrap_or(TruncationPolicy::Fixed(500)),
                &mut w,
            )
        }
        Command::Average(a) => {
            let mut w = CsvWriter::new(open_output(a.out.output.as_deref())?, precision);
            cmd_average(&a, truncation.unwrap_or_default(), &mut w)
        }
        Command::Histogram(a) => {
            let truncation = truncation.unwrap_or(TruncationPolicy::Fixed(1000));
            let fit_path = a
                .fit_output
                .clone()
                .or_else(|| a.out.output.as_deref().map(fit_path_for));
            let mut hist = CsvWriter::new(open_output(a.out.output.as_deref())?, precision);
            let mut fit = match fit_path {
                Some(p) => Some(CsvWriter::new(open_output(Some(&p))?, precision)),
                None => None,
            };
            cmd_histogram(&a, truncation, &mut hist, fit.as_mut())
        }
        Command::VarianceScan(a) => {
            let mut w = CsvWriter::new(open_output(a.out.output.as_deref())?, precision);
            cmd_variance_scan(
                &a,
                truncation.unwrap_or(TruncationPolicy::Fixed(1000)),
                &mut w,
            )
        }
        Command::Entanglement(a) => {
            let mut w = CsvWriter::new(open_output(a.out.output.as_deref())?, precision);
            cmd_entanglement(&a, &mut w)
        }
        Command::Verify(a) => cmd_verify(&a, truncation.unwrap_or_default(), report),
    }
}

/// `out.csv` -> `out_fit.csv`.
pub fn fit_path_for(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("histogram");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}_fit.{ext}"))
}

pub fn cmd_trajectory<W: Write>(
    a: &TrajectoryArgs,
    truncation: TruncationPolicy,
    w: &mut CsvWriter<W>,
) -> CliResult<()> {
    let p = a.model.params(a.beta, truncation)?;
    let grid = uniform_grid(a.t_max, a.dt)?;
    let tr = trajectory(&a.s0, &grid, &p)?;
    w.comment("beta", a.beta)?;
    w.comment("truncation", truncation)?;
    w.header(&["t", "sx", "sy", "sz"])?;
    for (t, s) in tr.iter() {
        w.row(&[t, s.sx, s.sy, s.sz])?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_average<W: Write>(
    a: &AverageArgs,
    truncation: TruncationPolicy,
    w: &mut CsvWriter<W>,
) -> CliResult<()> {
    let resonant = a.model.delta_omega == 0.0;
    let mut columns = vec!["beta"];
    if !resonant {
        columns.push("delta_omega");
    }
    columns.extend(["avg_l1", "avg_l3", "avg_l4"]);
    if a.numeric_check {
        if a.beta_inf {
            return Err(CliError::Usage(
                "--numeric-check needs a finite beta grid".into(),
            ));
        }
        columns.extend(["numeric_sz", "abs_deviation"]);
    }
    w.comment("truncation", truncation)?;
    w.header(&columns)?;

    let betas: Vec<f64> = if a.beta_inf {
        vec![f64::INFINITY]
    } else {
        a.beta.0.clone()
    };
    if betas.is_empty() {
        return Err(CliError::Usage("empty beta grid".into()));
    }
    for &beta in &betas {
        if !(beta >= 0.0) {
            return Err(CliError::Usage(format!("beta must be >= 0, got {beta}")));
        }
        let avgs = if beta.is_infinite() {
            let p = a.model.params(1.0, truncation)?;
            time_average_limits(&p).1
        } else if resonant {
            // reduced units: beta hbar omega_0
            time_average_closed_resonant(beta * a.model.omega0)?
        } else {
            time_average_closed_general(&a.model.params(beta, truncation)?)?
        };
        let mut row = vec![beta];
        if !resonant {
            row.push(a.model.delta_omega);
        }
        row.extend([avgs.avg_l1, avgs.avg_l3, avgs.avg_l4]);
        if a.numeric_check {
            let p = a.model.params(beta, truncation)?;
            let numeric = time_average_numeric(&a.s0, &p, a.t_max, a.dt)?;
            let closed = average_bloch(&a.s0, &avgs);
            row.extend([numeric.sz, numeric.max_abs_diff(&closed)]);
        }
        w.row(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_histogram<W: Write, F: Write>(
    a: &HistogramArgs,
    truncation: TruncationPolicy,
    hist_out: &mut CsvWriter<W>,
    fit_out: Option<&mut CsvWriter<F>>,
) -> CliResult<()> {
    let p = a.model.params(a.beta, truncation)?;
    let series = sample_series(&p, &BlochVector::ZERO, a.dt, a.samples as usize)?;
    let h = build_histogram(&series, a.class_interval)?;
    let moments = sample_moments(&series)?;

    hist_out.comment("beta", a.beta)?;
    hist_out.comment("samples", a.samples)?;
    hist_out.comment("dt", a.dt)?;
    hist_out.comment("class_interval", a.class_interval)?;
    hist_out.header(&["bin_left", "count"])?;
    for (edge, &count) in h.bin_left_edges.iter().zip(&h.counts) {
        hist_out.row(&[*edge, count as f64])?;
    }
    hist_out.flush()?;

    let Some(fit_out) = fit_out else {
        return Ok(());
    };
    let skew = sample_skewness(&series)?;
    let centers: Vec<f64> = h.bin_centers().collect();
    match a.fit {
        FitKind::Arcsine => {
            let fit = fit_arcsine_amplitude(&h)?;
            fit_out.comment("fit", "arcsine")?;
            fit_out.comment("a", fit_out.number(fit.amplitude))?;
            fit_out.comment("residual", fit_out.number(fit.residual))?;
            fit_out.comment(
                "a_interior",
                fit_out.number(fit_arcsine_amplitude_interior(&h)?.amplitude),
            )?;
            fit_out.comment("l1_distance", fit_out.number(arcsine_l1_distance(&h)?))?;
            fit_out.comment("mu", fit_out.number(moments.mu))?;
            fit_out.comment("sigma2", fit_out.number(moments.sigma2))?;
            fit_out.comment("skewness", fit_out.number(skew))?;
            fit_out.header(&["y", "fitted_value"])?;
            for &y in &centers {
                if let Ok(d) = arcsine_density(y) {
                    fit_out.row(&[y, fit.amplitude * d])?;
                }
            }
        }
        FitKind::Normal => {
            let fit = fit_normal(&h, &moments)?;
            fit_out.comment("fit", "normal")?;
            fit_out.comment("a", fit_out.number(fit.amplitude))?;
            fit_out.comment("peak_height", fit_out.number(fit.peak_height))?;
            fit_out.comment("residual", fit_out.number(fit.residual))?;
            fit_out.comment("mu", fit_out.number(fit.mu))?;
            fit_out.comment("sigma2", fit_out.number(fit.sigma2))?;
            fit_out.comment("skewness", fit_out.number(skew))?;
            fit_out.header(&["y", "fitted_value"])?;
            for &y in &centers {
                fit_out.row(&[y, fit.amplitude * normal_density(y, fit.mu, fit.sigma2)])?;
            }
        }
        FitKind::None => {
            fit_out.comment("fit", "none")?;
            fit_out.comment("mu", fit_out.number(moments.mu))?;
            fit_out.comment("sigma2", fit_out.number(moments.sigma2))?;
            fit_out.comment("skewness", fit_out.number(skew))?;
            fit_out.header(&["y", "fitted_value"])?;
        }
    }
    fit_out.flush()?;
    Ok(())
}

pub fn cmd_variance_scan<W: Write>(
    a: &VarianceScanArgs,
    truncation: TruncationPolicy,
    w: &mut CsvWriter<W>,
) -> CliResult<()> {
    let betas = match &a.betas {
        Some(b) => b.0.clone(),
        None => log_grid(a.beta_min, a.beta_max, a.points as usize)?,
    };
    let template = a.model.params(1.0, truncation)?;
    // validate the fit window before the expensive scan
    if let FitWindow(Some((lo, hi))) = a.fit_range {
        let inside = betas.iter().filter(|b| (lo..=hi).contains(*b)).count();
        if inside < 3 {
            return Err(JcmError::InsufficientData(format!(
                "{inside} beta values in {lo}:{hi}, need at least 3"
            ))
            .into());
        }
    }
    let scan = variance_scan(&betas, &template, a.dt, a.samples as usize)?;
    w.comment("dt", a.dt)?;
    w.comment("samples", a.samples)?;
    w.comment("truncation", truncation)?;
    w.header(&["beta", "mu", "sigma2"])?;
    for (beta, m) in &scan {
        w.row(&[*beta, m.mu, m.sigma2])?;
    }
    if let FitWindow(Some((lo, hi))) = a.fit_range {
        let fit = power_law_fit(&scan, lo..=hi)?;
        w.comment("fit_range", format!("{lo}:{hi}"))?;
        w.comment("c1", w.number(fit.c1))?;
        w.comment("c2", w.number(fit.c2))?;
        w.comment("residual", w.number(fit.log_rms_residual))?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_entanglement<W: Write>(a: &EntanglementArgs, w: &mut CsvWriter<W>) -> CliResult<()> {
    let betas = &a.beta.0;
    if betas.is_empty() {
        return Err(CliError::Usage("empty beta list".into()));
    }
    let multi = betas.len() > 1;
    let mut columns = Vec::new();
    if multi {
        columns.push("beta");
    }
    columns.extend(["t", "p_af", "concurrence", "eof_lower_bound"]);
    w.header(&columns)?;
    let n = a.points as usize;
    for &beta in betas {
        for k in 0..n {
            let t = if n == 1 {
                0.0
            } else {
                a.t_max * k as f64 / (n - 1) as f64
            };
            let r = entanglement_lower_bound(t, beta)?;
            let mut row = Vec::with_capacity(5);
            if multi {
                row.push(beta);
            }
            row.extend([t, r.weight, r.concurrence, r.eof_lower_bound]);
            w.row(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_verify(
    a: &VerifyArgs,
    truncation: TruncationPolicy,
    report: &mut dyn Write,
) -> CliResult<()> {
    let set: CheckSet = a.checks.parse().map_err(CliError::Usage)?;
    let opts = VerifyOptions {
        checks: set,
        fock_dim: a.fock_dim,
        beta: a.beta,
        seed: a.seed,
        truncation,
    };
    let outcomes = run_checks(&opts)?;
    let mut failed = 0;
    for o in &outcomes {
        writeln!(
            report,
            "{:<48} deviation={:<12.3e} tolerance={:<10.1e} {}",
            o.name,
            o.deviation,
            o.tolerance,
            if o.passed() { "PASS" } else { "FAIL" }
        )?;
        if !o.passed() {
            failed += 1;
        }
    }
    writeln!(report, "{} checks, {} failed", outcomes.len(), failed)?;
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_vectors() {
        assert_eq!(parse_list("10,2,1").unwrap(), vec![10.0, 2.0, 1.0]);
        assert!(parse_list("").is_err());
        assert_eq!(
            parse_bloch("1,0,0").unwrap(),
            BlochVector::new(1.0, 0.0, 0.0)
        );
        assert!(parse_bloch("1,1,0").is_err());
        assert!(parse_bloch("1,0").is_err());
        assert_eq!(parse_range("0.01:0.1").unwrap(), Some((0.01, 0.1)));
        assert_eq!(parse_range("none").unwrap(), None);
        assert!(parse_range("0.1:0.01").is_err());
    }

    #[test]
    fn fit_path_is_derived() {
        assert_eq!(
            fit_path_for(Path::new("/tmp/h.csv")),
            PathBuf::from("/tmp/h_fit.csv")
        );
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
