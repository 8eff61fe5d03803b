//! Command-line driver.
//!
//! Exit codes: 0 success, 1 output I/O failure, 2 usage, 3 parse,
//! 4 precondition, 5 subproblem failure, 6 limits hit without a bound.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fwph_core::exec::Clock;
use fwph_core::hedging::{fwph_initialize, run_fwph, run_ph, HedgingConfig, RunResult};
use fwph_core::milp::{MilpLimits, MilpSolver, MilpStatus};
use fwph_core::model::{lagrangian_value, DualMultipliers, TwoStageProblem};
use fwph_core::oracle::{enumerate_ld, extensive_form, kelley_ld, KelleyOptions, ENUMERATION_BUDGET};
use fwph_core::{Error, SubproblemFailure};

use crate::generator::{generate_instance, Shape};
use crate::native::parse_native;
use crate::runtime::{RayonExecutor, WallClock};
use crate::smps::read_smps;
use crate::trace::write_trace;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;
pub const EXIT_SUBPROBLEM: i32 = 5;
pub const EXIT_NO_BOUND: i32 = 6;

#[derive(Debug, Parser)]
#[command(name = "fwph", version, about = "Lagrangian dual bounds for two-stage stochastic MILPs")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the extensive form by branch and bound.
    SolveEf {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Reference optimum for the gap column.
        #[arg(long, allow_negative_numbers = true)]
        ref_value: Option<f64>,
    },
    /// Progressive hedging with a Lagrangian bound every `--bounds-every` iterations.
    Ph {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 1)]
        bounds_every: usize,
    },
    /// Frank-Wolfe progressive hedging.
    Fwph {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Reference values of the Lagrangian dual.
    Oracle {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value_t = OracleMethodArg::Both)]
        method: OracleMethodArg,
        /// Also solve the extensive form.
        #[arg(long)]
        ef: bool,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Write a generated instance in the native format.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        shape: ShapeArgs,
    },
    /// One run per penalty value with a summary table.
    Sweep {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Algorithm::Fwph)]
        algo: Algorithm,
        /// Comma-separated penalty values.
        #[arg(long = "rho", value_delimiter = ',', required = true)]
        rhos: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        bounds_every: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Native,
    Smps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleMethodArg {
    Enumeration,
    Kelley,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Ph,
    Fwph,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Instance file, or the common basename of an SMPS triple.
    #[arg(long, required_unless_present = "seed")]
    instance: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Native)]
    format: Format,
    /// Use the generated instance for this seed instead of a file.
    #[arg(long, conflicts_with = "instance")]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    tmax: usize,
    #[arg(long, default_value_t = 1000)]
    kmax: usize,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    #[arg(long)]
    time_limit: Option<f64>,
    /// Scenario worker threads; 0 uses every core.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// CSV trace path (a directory for `sweep`).
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    ref_value: Option<f64>,
}

#[derive(Debug, Args)]
struct ShapeArgs {
    #[arg(long, default_value_t = Shape::default().scenarios)]
    scenarios: usize,
    #[arg(long, default_value_t = Shape::default().n_x)]
    nx: usize,
    #[arg(long, default_value_t = Shape::default().n_y_int)]
    ny_int: usize,
    #[arg(long, default_value_t = Shape::default().n_y_cont)]
    ny_cont: usize,
    #[arg(long, default_value_t = Shape::default().rows)]
    rows: usize,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invalid(_)
        | Error::RecourseInfeasible { .. }
        | Error::NonBinaryFirstStage { .. }
        | Error::DualInfeasible { .. }
        | Error::NoCommonPoint
        | Error::Config(_)
        | Error::EnumerationBudget { .. } => EXIT_PRECONDITION,
        Error::Subproblem { failure: SubproblemFailure::NoBound, .. }
        | Error::ExtensiveForm(SubproblemFailure::NoBound)
        | Error::KelleyLimit { .. } => EXIT_NO_BOUND,
        Error::Subproblem { .. } | Error::ExtensiveForm(_) | Error::Lp(_) | Error::OracleLp => EXIT_SUBPROBLEM,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(exit_code(&e), e.to_string())
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_IO, format!("{}: {e}", path.display()))
}

fn load(args: &InstanceArgs) -> Result<TwoStageProblem, Failure> {
    if let Some(seed) = args.seed {
        let (problem, _) = generate_instance(seed, &Shape::default()).map_err(|m| Failure::new(EXIT_USAGE, m))?;
        return Ok(problem);
    }
    let path = args.instance.as_ref().expect("clap requires --instance or --seed");
    match args.format {
        Format::Native => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
            parse_native(&text)
                .map(|i| i.problem)
                .map_err(|e| Failure::new(EXIT_PARSE, e.in_file(path.display().to_string()).to_string()))
        }
        Format::Smps => read_smps(path).map_err(|e| Failure::new(EXIT_PARSE, e.to_string())),
    }
}

/// `|(ref - value) / ref| * 100`.
pub fn gap_percent(reference: f64, value: f64) -> Option<f64> {
    (reference != 0.0 && value.is_finite()).then(|| ((reference - value) / reference).abs() * 100.0)
}

fn gap_text(reference: Option<f64>, value: f64) -> String {
    match reference.map(|r| gap_percent(r, value)) {
        None => "n/a".into(),
        Some(None) => "undefined".into(),
        Some(Some(g)) => format!("{g:.4}%"),
    }
}

fn executor(threads: usize) -> Result<RayonExecutor, Failure> {
    RayonExecutor::new(threads).map_err(|e| Failure::new(EXIT_USAGE, format!("thread pool: {e}")))
}

fn config(rho: f64, run: &RunArgs, bounds_every: usize) -> HedgingConfig {
    let mut cfg = HedgingConfig::new(rho);
    cfg.alpha = run.alpha;
    cfg.t_max = run.tmax;
    cfg.k_max = run.kmax;
    cfg.eps = run.eps;
    cfg.time_limit = run.time_limit;
    cfg.bounds_every = bounds_every;
    cfg
}

fn hedge(problem: &TwoStageProblem, algo: Algorithm, cfg: &HedgingConfig, threads: usize) -> Result<(RunResult, f64), Failure> {
    let clock = WallClock::new();
    let solver = MilpSolver::new(MilpLimits::default(), &clock);
    let exec = executor(threads)?;
    let omega0 = DualMultipliers::zeros(problem);
    let result = match algo {
        Algorithm::Ph => run_ph(problem, &omega0, cfg, &solver, &exec)?,
        Algorithm::Fwph => {
            let init = fwph_initialize(problem, &omega0, &solver, &exec)?;
            run_fwph(problem, &init, &omega0, cfg, &solver, &exec)?
        }
    };
    if !result.best_phi.is_finite() {
        return Err(Failure::new(EXIT_NO_BOUND, "limits hit before any bound was computed"));
    }
    Ok((result, clock.now()))
}

fn save_trace(path: &Path, result: &RunResult) -> Result<(), Failure> {
    let file = File::create(path).map_err(|e| io_failure(path, e))?;
    write_trace(BufWriter::new(file), &result.trace).map_err(|e| io_failure(path, e))
}

fn summary(name: &str, result: &RunResult, reference: Option<f64>, seconds: f64) -> String {
    format!(
        "{name}: phi={} best_phi={} residual={:e} iterations={} gap={} time={seconds:.3}s termination={}",
        result.phi,
        result.best_phi,
        result.final_residual(),
        result.trace.last().map_or(0, |r| r.k),
        gap_text(reference, result.best_phi),
        result.termination.letter(),
    )
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let w = |out: &mut dyn Write, line: String| writeln!(out, "{line}").map_err(|e| Failure::new(EXIT_IO, e.to_string()));
    match cli.command {
        Command::SolveEf { instance, time_limit, ref_value } => {
            let problem = load(&instance)?;
            let clock = WallClock::new();
            let solver = MilpSolver::new(MilpLimits { node_limit: None, time_limit }, &clock);
            let ef = problem.build_extensive_form();
            let sol = solver.solve(&ef).map_err(|e| Failure::from(Error::ExtensiveForm(SubproblemFailure::Solver(e))))?;
            let letter = match sol.status {
                MilpStatus::Optimal => 'C',
                MilpStatus::BoundOnly if sol.point.is_some() => 'T',
                MilpStatus::BoundOnly => {
                    return Err(Failure::new(
                        EXIT_NO_BOUND,
                        format!("no feasible point found before the limit; bound {}", sol.dual_bound),
                    ))
                }
                MilpStatus::Infeasible => return Err(Error::ExtensiveForm(SubproblemFailure::Infeasible).into()),
                MilpStatus::Unbounded => return Err(Error::ExtensiveForm(SubproblemFailure::Unbounded).into()),
            };
            w(
                out,
                format!(
                    "solve-ef: objective={} bound={} nodes={} gap={} time={:.3}s termination={letter}",
                    sol.objective,
                    sol.dual_bound,
                    sol.nodes,
                    gap_text(ref_value, sol.objective),
                    clock.now()
                ),
            )
        }
        Command::Ph { instance, rho, run, bounds_every } => {
            let problem = load(&instance)?;
            let (result, secs) = hedge(&problem, Algorithm::Ph, &config(rho, &run, bounds_every), run.threads)?;
            if let Some(path) = &run.trace {
                save_trace(path, &result)?;
            }
            w(out, summary("ph", &result, run.ref_value, secs))
        }
        Command::Fwph { instance, rho, run } => {
            let problem = load(&instance)?;
            let (result, secs) = hedge(&problem, Algorithm::Fwph, &config(rho, &run, 1), run.threads)?;
            if let Some(path) = &run.trace {
                save_trace(path, &result)?;
            }
            w(out, summary("fwph", &result, run.ref_value, secs))
        }
        Command::Oracle { instance, method, ef, threads } => {
            let problem = load(&instance)?;
            let exec = executor(threads)?;
            let solver = MilpSolver::default();
            let ws = lagrangian_value(&problem, &DualMultipliers::zeros(&problem), &solver, &exec)?;
            w(out, format!("oracle: wait-and-see={}", ws.value))?;
            if matches!(method, OracleMethodArg::Enumeration | OracleMethodArg::Both) {
                let r = enumerate_ld(&problem, ENUMERATION_BUDGET)?;
                w(out, format!("oracle: enumeration={}", r.value))?;
            }
            if matches!(method, OracleMethodArg::Kelley | OracleMethodArg::Both) {
                let r = kelley_ld(&problem, &KelleyOptions::default(), &solver, &exec)?;
                w(out, format!("oracle: kelley={} iterations={}", r.value, r.iterations))?;
            }
            if ef {
                let r = extensive_form(&problem, &solver)?;
                w(out, format!("oracle: extensive-form={}", r.value))?;
            }
            Ok(())
        }
        Command::Gen { seed, out: path, shape } => {
            let shape = Shape {
                scenarios: shape.scenarios,
                n_x: shape.nx,
                n_y_int: shape.ny_int,
                n_y_cont: shape.ny_cont,
                rows: shape.rows,
            };
            let (_, doc) = generate_instance(seed, &shape).map_err(|m| Failure::new(EXIT_USAGE, m))?;
            match path {
                Some(p) => std::fs::write(&p, doc).map_err(|e| io_failure(&p, e)),
                None => out.write_all(doc.as_bytes()).map_err(|e| Failure::new(EXIT_IO, e.to_string())),
            }
        }
        Command::Sweep { instance, run, algo, rhos, bounds_every } => {
            let problem = load(&instance)?;
            if let Some(dir) = &run.trace {
                std::fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
            }
            let name = match algo {
                Algorithm::Ph => "ph",
                Algorithm::Fwph => "fwph",
            };
            w(out, format!("{:>10} {:>16} {:>10} {:>7} {:>9} {:>5}", "rho", "best_phi", "gap", "iters", "time_s", "term"))?;
            for rho in rhos {
                let cfg = config(rho, &run, bounds_every);
                let (result, secs) = hedge(&problem, algo, &cfg, run.threads)?;
                if let Some(dir) = &run.trace {
                    save_trace(&dir.join(format!("{name}_rho_{rho}.csv")), &result)?;
                }
                w(
                    out,
                    format!(
                        "{rho:>10} {:>16.6} {:>10} {:>7} {secs:>9.3} {:>5}",
                        result.best_phi,
                        gap_text(run.ref_value, result.best_phi),
                        result.trace.last().map_or(0, |r| r.k),
                        result.termination.letter()
                    ),
                )?;
            }
            Ok(())
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "fwph: error: {}", f.message);
            f.code
        }
    }
}
