//! Command-line front end.
//!
//! Exit codes: 0 success, 1 solver failure, 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use flatband_core::oracle::{compare_full_vs_meanfield, FullModelSpec, MAX_SITES};
use flatband_core::phase::{
    boundary_entry, population_cell, AxisScale, BoundaryStatus, PhaseBoundary, SweepSpec,
    BOUNDARY_METHOD,
};
use flatband_core::{make_cosine_dispersion, minimize_over_psi, ModelParams, SweepAxis, SweepGrid};

use crate::config::{parse_list, resolve_workers, ConfigFile, UsageError};
use crate::fixtures::format_report;
use crate::output::{boundary_csv, error_kind, fmt_num, popmap_csv, popmap_pgm};
use crate::parallel::map_indexed;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SOLVER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Mean-field phase diagram of a multimode cavity coupled to two flat bands.
///
/// All frequencies are in units of the band gap ω₁₂.
#[derive(Debug, Parser)]
#[command(name = "flatband", version, propagate_version = true)]
pub struct Cli {
    /// Optional key = value file; command-line flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimise the mean-field energy at one (Ω, Δ) point.
    #[command(allow_negative_numbers = true)]
    Solve(SolveArgs),
    /// Critical coupling Ω_c as a function of Δ, written as CSV.
    #[command(allow_negative_numbers = true)]
    Boundary(BoundaryArgs),
    /// Excited-band population over an (Ω, Δ) grid, as CSV and optionally PGM.
    #[command(allow_negative_numbers = true)]
    Popmap(PopmapArgs),
    /// Exact diagonalisation of 1–3 sites against the mean field and the Rabi model.
    #[command(allow_negative_numbers = true)]
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Lowest bosonic frequency ω_m [default: 1]
    #[arg(long)]
    pub omega_m: Option<f64>,
    /// Initial Fock cutoff of the adaptive truncation [default: 20]
    #[arg(long)]
    pub n_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Coupling Ω [default: 0]
    #[arg(long)]
    pub omega: Option<f64>,
    /// Dispersion half width Δ [default: 0]
    #[arg(long)]
    pub delta: Option<f64>,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

impl std::str::FromStr for Scale {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Scale as ValueEnum>::from_str(s, true)
    }
}

impl From<Scale> for AxisScale {
    fn from(s: Scale) -> Self {
        match s {
            Scale::Linear => AxisScale::Linear,
            Scale::Log => AxisScale::Log,
        }
    }
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    /// Smallest Δ of the axis [default: 0.1]
    #[arg(long)]
    pub delta_min: Option<f64>,
    /// Largest Δ of the axis [default: 100]
    #[arg(long)]
    pub delta_max: Option<f64>,
    /// Number of Δ points [default: 20]
    #[arg(long)]
    pub delta_count: Option<usize>,
    /// Spacing of the Δ axis [default: log]
    #[arg(long, value_enum)]
    pub delta_scale: Option<Scale>,
    /// Explicit comma-separated Δ values, replacing the axis
    #[arg(long, value_name = "LIST")]
    pub delta_values: Option<String>,
    /// Bisection tolerance on Ω_c [default: 1e-3]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Worker threads [default: $FLATBAND_WORKERS, else the number of CPUs]
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output CSV file [default: standard output]
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    #[value(name = "csv+pgm")]
    CsvPgm,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Args)]
pub struct PopmapArgs {
    /// Smallest Ω [default: 0]
    #[arg(long)]
    pub omega_min: Option<f64>,
    /// Largest Ω [default: 1.5]
    #[arg(long)]
    pub omega_max: Option<f64>,
    /// Number of Ω points [default: 40]
    #[arg(long)]
    pub omega_count: Option<usize>,
    /// Smallest Δ [default: 0]
    #[arg(long)]
    pub delta_min: Option<f64>,
    /// Largest Δ [default: 20]
    #[arg(long)]
    pub delta_max: Option<f64>,
    /// Number of Δ points [default: 40]
    #[arg(long)]
    pub delta_count: Option<usize>,
    /// Spacing of the Δ axis [default: linear]
    #[arg(long, value_enum)]
    pub delta_scale: Option<Scale>,
    /// csv, or csv+pgm to also write a heatmap next to the CSV [default: csv]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads [default: $FLATBAND_WORKERS, else the number of CPUs]
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output CSV file; the PGM gets the same name with extension .pgm
    /// [default: standard output, csv only]
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Number of sites, 1 to 3 [default: 2]
    #[arg(long)]
    pub sites: Option<usize>,
    /// Half width Δ of the cosine dispersion [default: 0]
    #[arg(long)]
    pub delta: Option<f64>,
    /// Coupling Ω [default: 0]
    #[arg(long)]
    pub omega: Option<f64>,
    /// Lowest bosonic frequency ω_m [default: 1]
    #[arg(long)]
    pub omega_m: Option<f64>,
    /// Fock cutoff per site [default: 20, or the largest allowed below that]
    #[arg(long)]
    pub n_max_site: Option<usize>,
    /// Also write the report to this file
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Failure of a run, mapped onto the exit code.
#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Solver(String),
}

impl From<UsageError> for RunError {
    fn from(e: UsageError) -> Self {
        RunError::Usage(e.0)
    }
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => EXIT_USAGE,
            RunError::Solver(_) => EXIT_SOLVER,
        }
    }
}

fn usage(msg: impl Into<String>) -> RunError {
    RunError::Usage(msg.into())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub params: ModelParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryConfig {
    pub base: ModelParams,
    pub deltas: Vec<f64>,
    pub tol: f64,
    pub workers: usize,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopmapConfig {
    pub base: ModelParams,
    pub spec: SweepSpec,
    pub format: Format,
    pub workers: usize,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub spec: FullModelSpec,
    pub output: Option<PathBuf>,
}

/// Fully resolved configuration of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub enum RunConfig {
    Solve(SolveConfig),
    Boundary(BoundaryConfig),
    Popmap(PopmapConfig),
    Oracle(OracleConfig),
}

fn base_params(model: &ModelArgs, file: &ConfigFile) -> Result<ModelParams, RunError> {
    let omega_m = file.pick(model.omega_m, "omega_m", 1.0)?;
    let n_max = file.pick(model.n_max, "n_max", 20)?;
    if !(omega_m.is_finite() && omega_m > 0.0) {
        return Err(usage("--omega-m must be positive"));
    }
    Ok(ModelParams::new(omega_m, 0.0, 0.0).with_n_max(n_max))
}

fn non_negative(value: f64, flag: &str) -> Result<f64, RunError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(usage(format!("{flag} must be a non-negative number")))
    }
}

fn axis(min: f64, max: f64, count: usize, scale: Scale, name: &str) -> Result<SweepAxis, RunError> {
    let axis = SweepAxis {
        min,
        max,
        count,
        scale: scale.into(),
    };
    axis.validate()
        .map_err(|e| usage(format!("{name} axis: {e}")))?;
    Ok(axis)
}

impl RunConfig {
    pub fn resolve(command: &Command, file: &ConfigFile) -> Result<Self, RunError> {
        match command {
            Command::Solve(a) => {
                let base = base_params(&a.model, file)?;
                let omega = non_negative(file.pick(a.omega, "omega", 0.0)?, "--omega")?;
                let delta = non_negative(file.pick(a.delta, "delta", 0.0)?, "--delta")?;
                Ok(RunConfig::Solve(SolveConfig {
                    params: ModelParams {
                        delta,
                        omega_coupling: omega,
                        ..base
                    },
                }))
            }
            Command::Boundary(a) => {
                let base = base_params(&a.model, file)?;
                let tol = file.pick(a.tol, "tol", 1e-3)?;
                if !(tol.is_finite() && tol > 0.0) {
                    return Err(usage("--tol must be positive"));
                }
                let deltas = match file.pick_opt(a.delta_values.clone(), "delta_values")? {
                    Some(list) => parse_list(&list)?,
                    None => axis(
                        file.pick(a.delta_min, "delta_min", 0.1)?,
                        file.pick(a.delta_max, "delta_max", 100.0)?,
                        file.pick(a.delta_count, "delta_count", 20)?,
                        file.pick(a.delta_scale, "delta_scale", Scale::Log)?,
                        "delta",
                    )?
                    .values(),
                };
                if deltas.is_empty() || deltas.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
                    return Err(usage("boundary needs delta values > 0"));
                }
                Ok(RunConfig::Boundary(BoundaryConfig {
                    base,
                    deltas,
                    tol,
                    workers: resolve_workers(a.workers, file)?,
                    output: file.pick_opt(a.output.clone(), "output")?,
                }))
            }
            Command::Popmap(a) => {
                let base = base_params(&a.model, file)?;
                let omega_axis = axis(
                    file.pick(a.omega_min, "omega_min", 0.0)?,
                    file.pick(a.omega_max, "omega_max", 1.5)?,
                    file.pick(a.omega_count, "omega_count", 40)?,
                    Scale::Linear,
                    "omega",
                )?;
                let delta_axis = axis(
                    file.pick(a.delta_min, "delta_min", 0.0)?,
                    file.pick(a.delta_max, "delta_max", 20.0)?,
                    file.pick(a.delta_count, "delta_count", 40)?,
                    file.pick(a.delta_scale, "delta_scale", Scale::Linear)?,
                    "delta",
                )?;
                if omega_axis.min < 0.0 || delta_axis.min < 0.0 {
                    return Err(usage("axes must be non-negative"));
                }
                let format = file.pick(a.format, "format", Format::Csv)?;
                let output: Option<PathBuf> = file.pick_opt(a.output.clone(), "output")?;
                if format == Format::CsvPgm && output.is_none() {
                    return Err(usage("--format csv+pgm needs --output"));
                }
                Ok(RunConfig::Popmap(PopmapConfig {
                    base,
                    spec: SweepSpec {
                        omega_axis,
                        delta_axis,
                    },
                    format,
                    workers: resolve_workers(a.workers, file)?,
                    output,
                }))
            }
            Command::Oracle(a) => {
                let n_sites = file.pick(a.sites, "sites", 2)?;
                if !(1..=MAX_SITES).contains(&n_sites) {
                    return Err(usage(format!(
                        "size limit: --sites must be between 1 and {MAX_SITES}"
                    )));
                }
                let delta = non_negative(file.pick(a.delta, "delta", 0.0)?, "--delta")?;
                let omega = non_negative(file.pick(a.omega, "omega", 0.0)?, "--omega")?;
                let omega_m = file.pick(a.omega_m, "omega_m", 1.0)?;
                let default_cutoff = FullModelSpec::max_cutoff(n_sites).min(20);
                let n_max_site = file.pick(a.n_max_site, "n_max_site", default_cutoff)?;
                let dispersion = make_cosine_dispersion(omega_m, delta, n_sites)
                    .map_err(|e| usage(format!("dispersion: {e}")))?;
                let spec = FullModelSpec {
                    n_sites,
                    dispersion,
                    n_max_site,
                    omega12: 1.0,
                    omega_coupling: omega,
                };
                spec.validate().map_err(|e| usage(e.to_string()))?;
                Ok(RunConfig::Oracle(OracleConfig {
                    spec,
                    output: file.pick_opt(a.output.clone(), "output")?,
                }))
            }
        }
    }
}

/// `key=value` lines for one point.
pub fn run_solve(config: &SolveConfig) -> Result<String, RunError> {
    let s = minimize_over_psi(&config.params).map_err(|e| RunError::Solver(e.to_string()))?;
    Ok(format!(
        "psi_star={}\nground_energy={}\npopulation={}\nsigma_z={}\nphoton_number={}\nn_max_used={}\nconverged={}\n",
        fmt_num(s.psi_star),
        fmt_num(s.ground_energy),
        fmt_num(s.population),
        fmt_num(s.sigma_z_expectation),
        fmt_num(s.photon_number),
        s.n_max_used,
        s.converged
    ))
}

/// Boundary rows evaluated in parallel, sorted by Δ.
pub fn compute_boundary(config: &BoundaryConfig) -> PhaseBoundary {
    let mut deltas = config.deltas.clone();
    deltas.sort_by(f64::total_cmp);
    let entries = map_indexed(&deltas, config.workers, |&d| {
        boundary_entry(&config.base, d, config.tol)
    });
    PhaseBoundary {
        entries,
        method: BOUNDARY_METHOD,
    }
}

/// Population map evaluated in parallel, Δ-major.
pub fn compute_popmap(config: &PopmapConfig) -> SweepGrid {
    let omegas = config.spec.omega_axis.values();
    let points: Vec<(f64, f64)> = config
        .spec
        .delta_axis
        .values()
        .into_iter()
        .flat_map(|d| omegas.iter().map(move |&w| (w, d)))
        .collect();
    let cells = map_indexed(&points, config.workers, |&(w, d)| {
        population_cell(&config.base, w, d)
    });
    SweepGrid {
        spec: config.spec,
        cells,
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), RunError> {
    match path {
        Some(p) => std::fs::write(p, bytes)
            .map_err(|e| RunError::Solver(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| RunError::Solver(format!("cannot write output: {e}"))),
    }
}

pub fn run_boundary(config: &BoundaryConfig) -> Result<(), RunError> {
    let boundary = compute_boundary(config);
    write_output(config.output.as_deref(), boundary_csv(&boundary).as_bytes())?;
    let mut failed = 0;
    for entry in &boundary.entries {
        if let BoundaryStatus::Failed(e) = &entry.status {
            eprintln!("delta={}: {e}", fmt_num(entry.delta));
            failed += 1;
        }
    }
    if failed == boundary.entries.len() {
        return Err(RunError::Solver("every boundary row failed".into()));
    }
    Ok(())
}

pub fn pgm_path(csv: &Path) -> PathBuf {
    csv.with_extension("pgm")
}

pub fn run_popmap(config: &PopmapConfig) -> Result<(), RunError> {
    let grid = compute_popmap(config);
    write_output(config.output.as_deref(), popmap_csv(&grid).as_bytes())?;
    if config.format == Format::CsvPgm {
        let csv = config.output.as_deref().expect("checked at resolution");
        write_output(Some(&pgm_path(csv)), &popmap_pgm(&grid))?;
    }
    let mut failed = 0;
    for cell in &grid.cells {
        if let Err(e) = &cell.result {
            eprintln!(
                "omega={} delta={}: {} ({e})",
                fmt_num(cell.omega),
                fmt_num(cell.delta),
                error_kind(e)
            );
            failed += 1;
        }
    }
    if failed == grid.cells.len() {
        return Err(RunError::Solver("every population cell failed".into()));
    }
    Ok(())
}

pub fn run_oracle(config: &OracleConfig) -> Result<(), RunError> {
    let report = compare_full_vs_meanfield(&config.spec).map_err(|e| RunError::Solver(e.to_string()))?;
    let text = format_report(&report);
    print!("{text}");
    if let Some(path) = &config.output {
        write_output(Some(path), text.as_bytes())?;
    }
    if !report.passed() {
        for check in report.checks.iter().filter(|c| !c.passed()) {
            eprintln!(
                "FAIL {}: |{} - {}| > {}",
                check.name,
                fmt_num(check.lhs),
                fmt_num(check.rhs),
                fmt_num(check.tolerance)
            );
        }
        return Err(RunError::Solver("oracle checks failed".into()));
    }
    Ok(())
}

pub fn run(config: &RunConfig) -> Result<(), RunError> {
    match config {
        RunConfig::Solve(c) => {
            print!("{}", run_solve(c)?);
            Ok(())
        }
        RunConfig::Boundary(c) => run_boundary(c),
        RunConfig::Popmap(c) => run_popmap(c),
        RunConfig::Oracle(c) => run_oracle(c),
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = cli
        .config
        .as_deref()
        .map_or_else(|| Ok(ConfigFile::default()), ConfigFile::load)
        .map_err(RunError::from)
        .and_then(|file| RunConfig::resolve(&cli.command, &file))
        .and_then(|config| run(&config));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            match &e {
                RunError::Usage(msg) => eprintln!("error: {msg}"),
                RunError::Solver(msg) => eprintln!("solver error: {msg}"),
            }
            e.exit_code()
        }
    }
}
