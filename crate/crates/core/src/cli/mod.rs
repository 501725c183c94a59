//! Command-line front end. [`run`] parses arguments, executes one command
//! and returns the process exit code, so the binary is a one-liner and the
//! whole interface is testable in-process.
//!
//! Exit codes: 0 ok, 1 I/O, 2 usage or bad input, 3 infeasible,
//! 4 validation failure, 5 numerical failure.

mod manifest;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::domain::{
    gen_demand, load_config, read_demand_csv, write_demand_csv, ConfigError, CostParams, DemandError, DemandSeries,
    FleetParams, Money, Scenario, ValidationError,
};
use crate::forecast::{
    acf, forecast_counts, pacf, r_squared, rls_fit, whiteness_check, ArimaOrder, ForecastError,
    DEFAULT_FORGETTING_FACTOR,
};
use crate::metaheuristic::{solve, solve_plain_ga, AnnealSchedule, SolveError, Solution, SolverConfig};
use crate::model::{validate, ModelError, Schedule};

pub use manifest::{RunManifest, MANIFEST_FILE};

pub const BENCH_HEADER: &str = "method,seed,best_cost,iterations_to_best,wall_ms";
pub const FORECAST_HEADER: &str = "week,demand,source";
pub const DIAGNOSTICS_HEADER: &str = "lag,acf,pacf";
pub const SUMMARY_HEADER: &str = "Q,df,pass,r_squared";

#[derive(Debug, Parser)]
#[command(name = "vesselplan", version, about = "Fleet procurement scheduling and demand forecasting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic weekly demand series.
    GenDemand(GenDemandArgs),
    /// Compute a minimum-cost purchase schedule.
    Solve(SolveArgs),
    /// Check a schedule file against the fleet constraints.
    Validate(ValidateArgs),
    /// Fit an ARIMA model to a demand series and extend it.
    Forecast(ForecastArgs),
    /// Compare the hybrid solver with the plain GA over several seeds.
    Bench(BenchArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
struct GenDemandArgs {
    #[arg(long, default_value_t = 104)]
    horizon: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Mean robots per week.
    #[arg(long, default_value_t = 20.0)]
    level: f64,
    /// Step standard deviation as a fraction of the level.
    #[arg(long, default_value_t = 0.2)]
    volatility: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args, Clone)]
struct SolverOverrides {
    /// Evaluation budget.
    #[arg(long)]
    max_iterations: Option<u64>,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    initial_temp: Option<f64>,
    /// Cooling coefficient s applied every generation.
    #[arg(long)]
    cooling: Option<f64>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    demand: PathBuf,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out_dir: PathBuf,
    /// Start from random plans instead of the greedy schedule.
    #[arg(long)]
    no_greedy_seed: bool,
    /// Override attrition and instruction capacity with a preset.
    #[arg(long)]
    scenario: Option<Scenario>,
    #[command(flatten)]
    solver: SolverOverrides,
    /// Record wall-clock time in the manifest.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    schedule: PathBuf,
    #[arg(long)]
    demand: PathBuf,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    scenario: Option<Scenario>,
}

#[derive(Debug, Args)]
struct ForecastArgs {
    #[arg(long)]
    demand: PathBuf,
    /// Model order as p,d,q.
    #[arg(long, default_value = "3,1,4")]
    order: ArimaOrder,
    #[arg(long, default_value_t = 8)]
    horizon: usize,
    /// RLS forgetting factor in (0.9, 1].
    #[arg(long, default_value_t = DEFAULT_FORGETTING_FACTOR)]
    lambda: f64,
    #[arg(long)]
    out_dir: PathBuf,
    /// Largest lag in the residual diagnostics.
    #[arg(long, default_value_t = 20)]
    max_lag: usize,
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    demand: PathBuf,
    /// Number of seeds; runs use seeds 0..n.
    #[arg(long)]
    seeds: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    scenario: Option<Scenario>,
    /// Also write each run's schedule and convergence trace here.
    #[arg(long)]
    runs_dir: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverOverrides,
    /// Fill the wall_ms column; without it the column is 0.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Write to this directory instead of the recorded one.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Write to this file instead of the recorded one.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failed command, carrying its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Io(String),
    Usage(String),
    Infeasible(String),
    Validation(Vec<String>),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Validation(_) => 4,
            CliError::Numerical(_) => 5,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<DemandError> for CliError {
    fn from(e: DemandError) -> Self {
        match e {
            DemandError::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ValidationError> for CliError {
    fn from(e: ValidationError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::InvalidConfig(_) | SolveError::Model(ModelError::HorizonMismatch { .. }) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Infeasible(other.to_string()),
        }
    }
}

impl From<ForecastError> for CliError {
    fn from(e: ForecastError) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Summary lines go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    // everything after the program name, for the manifest
    let recorded: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli.command, recorded, out, err) {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                CliError::Validation(lines) => {
                    for l in lines {
                        let _ = writeln!(out, "{l}");
                    }
                }
                CliError::Io(m) | CliError::Usage(m) | CliError::Infeasible(m) | CliError::Numerical(m) => {
                    let _ = writeln!(err, "error: {m}");
                }
            }
            e.exit_code()
        }
    }
}

fn execute(command: Command, recorded: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::GenDemand(a) => cmd_gen_demand(a, recorded),
        Command::Solve(a) => cmd_solve(a, recorded, out),
        Command::Validate(a) => cmd_validate(a, out),
        Command::Forecast(a) => cmd_forecast(a, recorded, out),
        Command::Bench(a) => cmd_bench(a, recorded, out),
        Command::Replay(a) => cmd_replay(a, out, err),
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path).map_err(|e| io_err(path, e))
}

fn write_manifest(path: &Path, manifest: &RunManifest) -> Result<(), CliError> {
    write_file(path, &manifest.to_text())
}

/// Sibling manifest for commands whose output is a single file.
fn manifest_beside(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest");
    out.with_file_name(name)
}

fn manifest(command: &str, recorded: Vec<String>, output: &Path) -> RunManifest {
    RunManifest {
        command: command.into(),
        output_dir: output.display().to_string(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        args: recorded,
        ..Default::default()
    }
}

fn elapsed_ms(start: Instant, timing: bool) -> u64 {
    if timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    }
}

fn load_problem(
    config: &Path,
    demand: &Path,
    scenario: Option<Scenario>,
) -> Result<(CostParams, FleetParams, DemandSeries), CliError> {
    let (costs, mut fleet) = load_config(config)?;
    if let Some(s) = scenario {
        fleet = s.apply(&fleet);
    }
    let demand = read_demand_csv(demand)?;
    demand.check_horizon(fleet.horizon)?;
    Ok((costs, fleet, demand))
}

fn solver_settings(o: &SolverOverrides, seed: u64) -> (SolverConfig, AnnealSchedule) {
    let mut cfg = SolverConfig { rng_seed: seed, ..Default::default() };
    let mut sched = AnnealSchedule::default();
    if let Some(v) = o.max_iterations {
        cfg.max_iterations = v;
    }
    if let Some(v) = o.population {
        cfg.population_size = v;
    }
    if let Some(v) = o.initial_temp {
        sched.initial_temp = v;
    }
    if let Some(v) = o.cooling {
        sched.cooling_coeff = v;
    }
    (cfg, sched)
}

fn cmd_gen_demand(a: GenDemandArgs, recorded: Vec<String>) -> Result<(), CliError> {
    let series = gen_demand(a.horizon, a.seed, a.level, a.volatility)?;
    write_file(&a.out, &write_demand_csv(&series))?;
    let m = RunManifest { rng_seed: Some(a.seed), ..manifest("gen-demand", recorded, &a.out) };
    write_manifest(&manifest_beside(&a.out), &m)
}

fn cmd_solve(a: SolveArgs, recorded: Vec<String>, out: &mut dyn Write) -> Result<(), CliError> {
    let start = Instant::now();
    let (costs, fleet, demand) = load_problem(&a.config, &a.demand, a.scenario)?;
    let (cfg, sched) = solver_settings(&a.solver, a.seed);
    let sol = solve(&demand, &fleet, &costs, &cfg, &sched, !a.no_greedy_seed)?;
    create_dir(&a.out_dir)?;
    write_file(&a.out_dir.join("schedule.csv"), &sol.schedule.to_csv())?;
    write_file(&a.out_dir.join("trace.csv"), &sol.trace.to_csv())?;
    let m = RunManifest {
        config_path: Some(a.config.display().to_string()),
        demand_path: Some(a.demand.display().to_string()),
        rng_seed: Some(a.seed),
        wall_ms: elapsed_ms(start, a.timing),
        ..manifest("solve", recorded, &a.out_dir)
    };
    write_manifest(&a.out_dir.join(MANIFEST_FILE), &m)?;
    let _ = writeln!(out, "total_cost {}", sol.schedule.total_cost);
    let _ = writeln!(out, "iterations_to_best {}", sol.trace.iterations_to_best);
    Ok(())
}

fn cmd_validate(a: ValidateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (costs, fleet, demand) = load_problem(&a.config, &a.demand, a.scenario)?;
    let text = std::fs::read_to_string(&a.schedule).map_err(|e| io_err(&a.schedule, e))?;
    let schedule = Schedule::from_csv(&text, &fleet).map_err(|e| CliError::Validation(vec![format!("PARSE: {e}")]))?;
    let violations = validate(&schedule, &demand, &fleet, &costs);
    if violations.is_empty() {
        let _ = writeln!(out, "OK");
        Ok(())
    } else {
        Err(CliError::Validation(violations.iter().map(|v| v.to_string()).collect()))
    }
}

fn cmd_forecast(a: ForecastArgs, recorded: Vec<String>, out: &mut dyn Write) -> Result<(), CliError> {
    let start = Instant::now();
    if a.horizon == 0 {
        return Err(CliError::Usage("--horizon must be at least 1".into()));
    }
    let observed = read_demand_csv(&a.demand)?;
    let y: Vec<f64> = observed.values().iter().map(|&v| v as f64).collect();
    let (model, resid) = rls_fit(&y, a.order, a.lambda)?;
    let predicted = forecast_counts(&model, &y, a.horizon)?;

    let r = acf(&resid, a.max_lag)?;
    let pr = pacf(&resid, a.max_lag)?;
    let white = whiteness_check(&resid, a.max_lag, a.order.n_params())?;
    // one-step fitted levels: the residual is also the level prediction error
    let actual = &y[a.order.d..];
    let fitted: Vec<f64> = actual.iter().zip(&resid).map(|(v, e)| v - e).collect();
    let r2 = match r_squared(&fitted, actual) {
        Ok(v) => Some(v),
        Err(ForecastError::Degenerate(_)) => None,
        Err(e) => return Err(e.into()),
    };

    let mut series = format!("{FORECAST_HEADER}\n");
    for (i, v) in observed.values().iter().enumerate() {
        let _ = writeln!(series, "{},{v},observed", i + 1);
    }
    for (i, v) in predicted.values().iter().enumerate() {
        let _ = writeln!(series, "{},{v},forecast", observed.len() + i + 1);
    }
    let mut diag = format!("{DIAGNOSTICS_HEADER}\n");
    for lag in 0..=a.max_lag {
        let _ = writeln!(diag, "{lag},{:.6},{:.6}", r[lag], pr[lag]);
    }
    let r2_text = r2.map_or_else(|| "NA".to_string(), |v| format!("{v:.6}"));
    let summary = format!("{SUMMARY_HEADER}\n{:.6},{},{},{r2_text}\n", white.statistic, white.df, white.pass);

    create_dir(&a.out_dir)?;
    write_file(&a.out_dir.join("forecast.csv"), &series)?;
    write_file(&a.out_dir.join("diagnostics.csv"), &diag)?;
    write_file(&a.out_dir.join("summary.csv"), &summary)?;
    let m = RunManifest {
        demand_path: Some(a.demand.display().to_string()),
        wall_ms: elapsed_ms(start, a.timing),
        ..manifest("forecast", recorded, &a.out_dir)
    };
    write_manifest(&a.out_dir.join(MANIFEST_FILE), &m)?;
    let _ = writeln!(out, "q_statistic {:.6} df {} white {}", white.statistic, white.df, white.pass);
    let _ = writeln!(out, "r_squared {r2_text}");
    Ok(())
}

/// Median of a non-empty sample; the mean of the middle pair for even sizes.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn cmd_bench(a: BenchArgs, recorded: Vec<String>, out: &mut dyn Write) -> Result<(), CliError> {
    if a.seeds == 0 {
        return Err(CliError::Usage("--seeds must be at least 1".into()));
    }
    let start = Instant::now();
    let (costs, fleet, demand) = load_problem(&a.config, &a.demand, a.scenario)?;
    if let Some(dir) = &a.runs_dir {
        create_dir(dir)?;
    }
    let mut csv = format!("{BENCH_HEADER}\n");
    let mut summary = String::new();
    for method in ["hybrid", "plain"] {
        let (mut best, mut iters, mut walls) = (Vec::new(), Vec::new(), Vec::new());
        for seed in 0..a.seeds {
            let (cfg, sched) = solver_settings(&a.solver, seed);
            let t = Instant::now();
            let sol: Solution = if method == "hybrid" {
                solve(&demand, &fleet, &costs, &cfg, &sched, true)?
            } else {
                solve_plain_ga(&demand, &fleet, &costs, &cfg)?
            };
            let wall = elapsed_ms(t, a.timing);
            let _ = writeln!(
                csv,
                "{method},{seed},{},{},{wall}",
                sol.schedule.total_cost, sol.trace.iterations_to_best
            );
            if let Some(dir) = &a.runs_dir {
                write_file(&dir.join(format!("{method}_{seed}_schedule.csv")), &sol.schedule.to_csv())?;
                write_file(&dir.join(format!("{method}_{seed}_trace.csv")), &sol.trace.to_csv())?;
            }
            best.push(sol.schedule.total_cost.cents() as f64);
            iters.push(sol.trace.iterations_to_best as f64);
            walls.push(wall as f64);
        }
        let med_cost = Money::from_cents(median(&best).round() as i64);
        let med_iters = median(&iters);
        let _ = writeln!(summary, "{method},median,{med_cost},{med_iters},{}", median(&walls));
        let _ = writeln!(out, "{method} median_best_cost {med_cost} median_iterations_to_best {med_iters}");
    }
    csv.push_str(&summary);
    write_file(&a.out, &csv)?;
    let m = RunManifest {
        config_path: Some(a.config.display().to_string()),
        demand_path: Some(a.demand.display().to_string()),
        rng_seed: Some(0),
        wall_ms: elapsed_ms(start, a.timing),
        ..manifest("bench", recorded, &a.out)
    };
    write_manifest(&manifest_beside(&a.out), &m)
}

fn cmd_replay(a: ReplayArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&a.manifest).map_err(|e| io_err(&a.manifest, e))?;
    let m = RunManifest::parse(&text).map_err(CliError::Usage)?;
    if m.args.first().map(String::as_str) == Some("replay") {
        return Err(CliError::Usage("a replay manifest cannot be replayed".into()));
    }
    let mut args = m.args.clone();
    for (flag, value) in [("--out-dir", &a.out_dir), ("--out", &a.out)] {
        let Some(value) = value else { continue };
        match args.iter().position(|x| x == flag) {
            Some(i) if i + 1 < args.len() => args[i + 1] = value.display().to_string(),
            _ => return Err(CliError::Usage(format!("recorded command has no {flag}"))),
        }
    }
    let argv = std::iter::once("vesselplan".to_string()).chain(args);
    match run(argv, out, err) {
        0 => Ok(()),
        // the inner run has already reported the failure
        1 => Err(CliError::Io("replayed command failed".into())),
        3 => Err(CliError::Infeasible("replayed command failed".into())),
        4 => Err(CliError::Validation(Vec::new())),
        5 => Err(CliError::Numerical("replayed command failed".into())),
        _ => Err(CliError::Usage("replayed command failed".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn usage_errors_exit_two() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["vesselplan", "gen-demand"], &mut o, &mut e), 2);
        assert!(String::from_utf8_lossy(&e).contains("--out"));
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(["vesselplan", "forecast", "--demand", "x", "--order", "0,0,0", "--out-dir", "y"], &mut o, &mut e);
        assert_eq!(code, 2);
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["vesselplan", "--help"], &mut o, &mut e), 0);
        assert!(!o.is_empty());
    }

    #[test]
    fn manifest_names() {
        assert_eq!(manifest_beside(Path::new("out/bench.csv")), PathBuf::from("out/bench.csv.manifest"));
    }
}
