//! momap: moment maps, stability certificates, and desk-scale gauge
//! theory from problem files.

mod handlers;
mod report;
mod schema;

use clap::{Parser, Subcommand, ValueEnum};
use handlers::{dispatch, CliError, Command, Flags};
use momap_core::solver::JacobianMode;
use rayon::prelude::*;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "momap", version, about = "Moment-map stability toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Clone, Copy, ValueEnum)]
enum JacobianArg {
    Exact,
    Fd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(clap::Args, Clone)]
struct RunArgs {
    /// Problem files (JSON); several files run as a batch on a worker pool.
    #[arg(required = true)]
    files: Vec<String>,
    /// Relative tolerance below which point components count as zero.
    #[arg(long)]
    drop_tol: Option<f64>,
    /// Newton convergence tolerance on the perturbed residual.
    #[arg(long)]
    newton_tol: Option<f64>,
    /// Continuation target for the perturbation parameter.
    #[arg(long)]
    eps_min: Option<f64>,
    /// Singular-value cutoff for stabilizer detection.
    #[arg(long)]
    stab_tol: Option<f64>,
    /// Jacobian assembly mode for the continuity solver.
    #[arg(long, value_enum, default_value = "exact")]
    jacobian: JacobianArg,
    /// Include the continuation trace in solver outcomes.
    #[arg(long)]
    trace: bool,
    /// Reject unknown fields in problem files instead of warning.
    #[arg(long)]
    strict_schema: bool,
    /// Output format; csv applies to weight tables and vortex outcomes.
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Sub {
    /// Stability classification: exact cones for torus problems,
    /// solver certificates otherwise.
    Classify(RunArgs),
    /// Run the continuity method and report the certificate.
    Solve(RunArgs),
    /// Maximal-weight table for the xi_list in the payload.
    Weights(RunArgs),
    /// Solve the vortex equation or scan a t-list for the threshold.
    Vortex(RunArgs),
    /// Classify a split holomorphic pair.
    Pair(RunArgs),
    /// Run the full acceptance property suite; nonzero exit on failure.
    Selftest {
        /// Seed for the randomized parts of the suite.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("LOG_LEVEL")).init();
    let cli = Cli::parse();
    let code = match cli.command {
        Sub::Classify(args) => run_batch(Command::Classify, &args),
        Sub::Solve(args) => run_batch(Command::Solve, &args),
        Sub::Weights(args) => run_batch(Command::Weights, &args),
        Sub::Vortex(args) => run_batch(Command::Vortex, &args),
        Sub::Pair(args) => run_batch(Command::Pair, &args),
        Sub::Selftest { seed } => selftest(seed),
    };
    std::process::exit(code);
}

fn flags_of(args: &RunArgs) -> Flags {
    Flags {
        drop_tol: args.drop_tol,
        newton_tol: args.newton_tol,
        eps_min: args.eps_min,
        stab_tol: args.stab_tol,
        jacobian: match args.jacobian {
            JacobianArg::Exact => JacobianMode::Exact,
            JacobianArg::Fd => JacobianMode::FiniteDifference,
        },
        trace: args.trace,
        strict: args.strict_schema,
    }
}

fn run_one(cmd: Command, path: &str, flags: &Flags, csv: bool) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("cannot read {path}: {e}")))?;
    let problem = schema::parse_problem(&text, flags.strict)?;
    let start = Instant::now();
    let outcome = dispatch(cmd, &problem, flags)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    if csv {
        handlers::to_csv(cmd, &outcome)
    } else {
        let rep = report::report(&problem.raw, outcome, wall_ms);
        Ok(report::canonical_string(&rep))
    }
}

fn run_batch(cmd: Command, args: &RunArgs) -> i32 {
    let flags = flags_of(args);
    let csv = matches!(args.format, FormatArg::Csv);
    let results: Vec<Result<String, CliError>> = args
        .files
        .par_iter()
        .map(|path| run_one(cmd, path, &flags, csv))
        .collect();
    let mut code = 0;
    for (path, result) in args.files.iter().zip(results) {
        match result {
            Ok(text) => println!("{text}"),
            Err(e) => {
                eprintln!("{path}: {}", e.message());
                code = code.max(e.exit_code());
            }
        }
    }
    code
}

fn selftest(seed: Option<u64>) -> i32 {
    let seed = seed.unwrap_or(momap_core::suite::SUITE_SEED);
    let mut failed = 0;
    for (name, result) in momap_core::suite::run_all(seed) {
        match result {
            Ok(summary) => println!("selftest {name}: PASS - {summary}"),
            Err(detail) => {
                println!("selftest {name}: FAIL - {detail}");
                failed += 1;
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        1
    } else {
        0
    }
}
