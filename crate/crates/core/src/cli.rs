//! Command-line front end.
//!
//! Exit codes: 0 optimal or valid, 1 infeasible, 2 input error, 3 numerical
//! breakdown.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::error::{ClqrError, Result};
use crate::generate::{generate, GeneratorConfig, InfeasibleKind};
use crate::io::{parse_problem, parse_solution, write_problem, write_solution, SolutionFile};
use crate::lqr::SolveMode;
use crate::oracle;
use crate::pipeline::{self, SolveOptions};
use crate::problem::{objective_value, primal_residuals, validate, ClqrProblem, Status, ToleranceConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "clqr", version, about = "Equality-constrained LQR solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem by constraint elimination.
    Solve(SolveArgs),
    /// Validate a problem and, optionally, the residuals of a solution.
    Check(CheckArgs),
    /// Write a random problem.
    Gen(GenArgs),
    /// Solve a problem with the dense reference solver.
    Oracle(OracleArgs),
    /// Time the pipeline against the reference solver, CSV on stdout.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct Tolerances {
    /// Relative threshold for treating a row as dependent.
    #[arg(long, default_value_t = ToleranceConfig::default().rank)]
    pub tol_rank: f64,
    /// Relative threshold for declaring a constant constraint violated.
    #[arg(long, default_value_t = ToleranceConfig::default().feas)]
    pub tol_feas: f64,
}

impl Tolerances {
    fn config(&self) -> ToleranceConfig {
        ToleranceConfig { rank: self.tol_rank, feas: self.tol_feas, ..ToleranceConfig::default() }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Problem file; `-` or absent reads standard input.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Solution file; absent writes standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "sequential")]
    pub mode: SolveMode,
    #[command(flatten)]
    pub tol: Tolerances,
    /// Print the reduction trace and scan conditioning to standard error.
    #[arg(long)]
    pub diagnostics: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Solution file to measure against the problem.
    #[arg(long, short)]
    pub solution: Option<PathBuf>,
    /// Largest acceptable primal residual.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub stages: usize,
    /// State dimensions as `LO-HI` or a single value.
    #[arg(long, default_value = "1-4", value_parser = parse_range)]
    pub state_range: (usize, usize),
    /// Control dimensions as `LO-HI` or a single value.
    #[arg(long, default_value = "1-3", value_parser = parse_range)]
    pub control_range: (usize, usize),
    /// Chance of each candidate constraint row, mixed and state-only alike.
    #[arg(long, default_value_t = 0.3)]
    pub density: f64,
    /// Add a contradictory row: duplicate, initial or zero.
    #[arg(long, num_args = 0..=1, default_missing_value = "duplicate")]
    pub infeasible: Option<InfeasibleKind>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated horizons.
    #[arg(long, value_delimiter = ',', default_value = "100,200,400")]
    pub stages_list: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    #[arg(long, default_value_t = 0.3)]
    pub density: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Best of this many runs per measurement.
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    /// Skip the reference solver above this many stages.
    #[arg(long, default_value_t = 200)]
    pub oracle_max_stages: usize,
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(['-', ':']).filter(|p| !p.is_empty()).collect();
    let num = |p: &str| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}"));
    match parts.as_slice() {
        [one] => num(one).map(|v| (v, v)),
        [lo, hi] => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                Err(format!("empty range {lo}-{hi}"))
            } else {
                Ok((lo, hi))
            }
        }
        _ => Err(format!("expected LO-HI, got `{s}`")),
    }
}

pub fn exit_code(err: &ClqrError) -> i32 {
    match err {
        ClqrError::Infeasible(_) => EXIT_INFEASIBLE,
        ClqrError::NumericalBreakdown { .. }
        | ClqrError::SingularReducedHessian { .. }
        | ClqrError::NonTermination { .. }
        | ClqrError::RankDeficient { .. }
        | ClqrError::NonSymmetric { .. } => EXIT_NUMERICAL,
        ClqrError::Dimension(_) | ClqrError::Precondition(_) | ClqrError::Parse(_) | ClqrError::Json(_) | ClqrError::Io(_) => {
            EXIT_INPUT
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(fs::read_to_string(p)?),
        _ => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            Ok(text)
        }
    }
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::write(p, format!("{text}\n"))?,
        _ => {
            let mut out = io::stdout().lock();
            writeln!(out, "{text}")?;
        }
    }
    Ok(())
}

/// Parses and validates; regularity violations are input errors.
fn load_problem(path: &Option<PathBuf>, tol: &ToleranceConfig) -> Result<ClqrProblem> {
    let (p, asym) = parse_problem(&read_input(path)?)?;
    if asym > 1e-9 {
        eprintln!("warning: symmetrized Q/R with relative asymmetry {asym:e}");
    }
    let violations = validate(&p, tol);
    if violations.is_empty() {
        Ok(p)
    } else {
        let lines: Vec<String> = violations.iter().map(ToString::to_string).collect();
        Err(ClqrError::Parse(format!("problem violates regularity conditions:\n  {}", lines.join("\n  "))))
    }
}

fn status_code(status: Status) -> i32 {
    match status {
        Status::Optimal => EXIT_OK,
        Status::Infeasible => EXIT_INFEASIBLE,
    }
}

fn run_solve(args: &SolveArgs) -> Result<i32> {
    let tol = args.tol.config();
    let problem = load_problem(&args.input, &tol)?;
    let result = pipeline::solve(&problem, &SolveOptions { mode: args.mode, tol })?;
    if args.diagnostics {
        if let Some(t) = &result.trace {
            eprintln!("reduction: {} of at most {} iterations", t.iterations, t.iteration_limit);
            eprintln!("eliminated states per time: {:?}", t.eliminated_states);
            eprintln!("eliminated controls per stage: {:?}", t.eliminated_controls);
            for s in t.steps.iter().filter(|s| !s.touched.is_empty()) {
                eprintln!("  {:<16} {:?}", s.step.name(), s.touched);
            }
        }
        if let Some(d) = &result.diagnostics {
            eprintln!("scan: max condition number {:e}", d.max_condition());
            if !d.flagged.is_empty() {
                eprintln!("scan: ill-conditioned stages {:?}", d.flagged);
            }
        }
        if result.outcome.is_optimal() {
            eprintln!("residuals: {:?}", result.outcome.residuals);
        }
    }
    if let Some(w) = &result.outcome.witness {
        eprintln!("infeasible: {w}");
    }
    write_output(&args.output, &write_solution(&SolutionFile::new(&result.outcome, result.trace.as_ref()))?)?;
    Ok(status_code(result.outcome.status))
}

fn run_check(args: &CheckArgs) -> Result<i32> {
    let tol = ToleranceConfig::default();
    let problem = load_problem(&args.input, &tol)?;
    eprintln!(
        "valid: {} stages, {} mixed rows, {} state-only rows",
        problem.num_stages(),
        problem.mixed_rows(),
        problem.state_only_rows()
    );
    let Some(path) = &args.solution else { return Ok(EXIT_OK) };
    let sol = parse_solution(&fs::read_to_string(path)?)?;
    if sol.status()? == Status::Infeasible {
        eprintln!("solution reports infeasible");
        return Ok(EXIT_INFEASIBLE);
    }
    let (x, u) = sol.trajectory();
    let residuals = primal_residuals(&problem, &x, &u)?;
    let objective = objective_value(&problem, &x, &u)?;
    println!(
        "objective {objective:.17e}\ndynamics {:e}\nmixed {:e}\nstate_only {:e}",
        residuals.dynamics, residuals.mixed, residuals.state_only
    );
    if let Some(claimed) = sol.objective {
        println!("claimed objective {claimed:.17e}");
    }
    if residuals.max_primal() <= args.tol {
        Ok(EXIT_OK)
    } else {
        eprintln!("solution violates the constraints by {:e}", residuals.max_primal());
        Ok(EXIT_INPUT)
    }
}

fn run_gen(args: &GenArgs) -> Result<i32> {
    let cfg = GeneratorConfig {
        stages: args.stages,
        state_range: args.state_range,
        control_range: args.control_range,
        mixed_density: args.density,
        state_density: args.density,
        infeasible: args.infeasible,
    };
    write_output(&args.output, &write_problem(&generate(args.seed, &cfg).problem)?)?;
    Ok(EXIT_OK)
}

fn run_oracle(args: &OracleArgs) -> Result<i32> {
    let tol = args.tol.config();
    let problem = load_problem(&args.input, &tol)?;
    let sol = oracle::solve(&problem, &tol)?;
    if let Some(w) = &sol.outcome.witness {
        eprintln!("infeasible: {w}");
    }
    write_output(&args.output, &write_solution(&SolutionFile::new(&sol.outcome, None))?)?;
    Ok(status_code(sol.outcome.status))
}

fn best_of<T>(repeats: usize, mut f: impl FnMut() -> Result<T>) -> Result<f64> {
    let mut best = f64::INFINITY;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        f()?;
        best = best.min(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(best)
}

fn run_bench(args: &BenchArgs) -> Result<i32> {
    let tol = ToleranceConfig::default();
    let mut out = io::stdout().lock();
    writeln!(out, "stages,pipeline_sequential_ms,pipeline_parallel_ms,oracle_ms")?;
    for &stages in &args.stages_list {
        let cfg = GeneratorConfig {
            stages,
            state_range: (args.n, args.n),
            control_range: (args.m, args.m),
            mixed_density: args.density,
            state_density: args.density,
            infeasible: None,
        };
        let p = generate(args.seed, &cfg).problem;
        let seq = best_of(args.repeats, || pipeline::solve(&p, &SolveOptions { mode: SolveMode::Sequential, tol }))?;
        let par = best_of(args.repeats, || pipeline::solve(&p, &SolveOptions { mode: SolveMode::Parallel, tol }))?;
        let oracle_ms = if stages <= args.oracle_max_stages {
            format!("{:.3}", best_of(1, || oracle::solve(&p, &tol))?)
        } else {
            String::new()
        };
        writeln!(out, "{stages},{seq:.3},{par:.3},{oracle_ms}")?;
    }
    Ok(EXIT_OK)
}

pub fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Check(a) => run_check(a),
        Command::Gen(a) => run_gen(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Bench(a) => run_bench(a),
    }
}

/// Parses `args` (program name first) and runs; errors go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
