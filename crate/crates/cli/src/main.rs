//! `renyi`: scans, searches, α-continuation, verifiers and archive analysis.
//!
//! Every command prints a one-line JSON summary on stdout. Exit status is 0 on
//! success, 1 when a verifier finds a violation, 2 for usage errors and 3 for
//! runtime failures such as unreadable archives.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use renyi_core::search::{
    ContinuationSchedule, CONTINUATION_DELTA0, CONTINUATION_DELTA_MIN, DEFAULT_COUNTER_MAX, DEFAULT_DELTA0,
    DEFAULT_DELTA_MIN,
};
use renyi_core::{Alpha, Objective};

#[derive(Parser, Debug)]
#[command(
    name = "renyi",
    version,
    about = "Rényi-α entanglement: violation search and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Superadditivity residual over Haar-random four-qubit states.
    Scan(ScanArgs),
    /// Monte Carlo minimization of a residual, optionally with restarts.
    Search(SearchArgs),
    /// Re-minimize an archived optimum along a descending α schedule.
    Continue(ContinueArgs),
    /// Randomized checks of inequalities that should hold.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Spectra, pairwise entanglements and residuals of an archived final state.
    Analyze(AnalyzeArgs),
    /// Export the accepted-state trace of an archive as CSV.
    TraceCsv(TraceCsvArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Seed of the random generator.
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Worker threads; 0 uses every available core.
    #[arg(long, env = "RENYI_WORKERS", default_value_t = 0)]
    workers: usize,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Number of states.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, default_value = "2", value_parser = parse_alpha)]
    alpha: Alpha,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, default_value = "2", value_parser = parse_alpha)]
    alpha: Alpha,
    #[arg(long, default_value = "ss", value_parser = parse_objective)]
    objective: Objective,
    /// Initial trace-distance radius.
    #[arg(long, default_value_t = DEFAULT_DELTA0, value_parser = parse_positive)]
    delta0: f64,
    /// Consecutive non-improving candidates before the radius is halved.
    #[arg(long, default_value_t = DEFAULT_COUNTER_MAX, value_parser = clap::value_parser!(u64).range(1..))]
    counter_max: u64,
    /// The run stops once the radius falls below this.
    #[arg(long, default_value_t = DEFAULT_DELTA_MIN, value_parser = parse_positive)]
    delta_min: f64,
    /// Archive whose final state seeds every restart instead of a Haar draw.
    #[arg(long)]
    seed_file: Option<PathBuf>,
    /// Independent restarts on consecutive generator streams.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    restarts: u64,
    /// Archive path for the best run.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ContinueArgs {
    /// Strictly decreasing α values, all above 1.
    #[arg(long, default_value = "1.5,1.2,1.1,1.05,1.02,1.01,1.005,1.002", value_parser = parse_schedule)]
    schedule: Schedule,
    #[arg(long, default_value_t = CONTINUATION_DELTA0, value_parser = parse_positive)]
    delta0: f64,
    #[arg(long, default_value_t = CONTINUATION_DELTA_MIN, value_parser = parse_positive)]
    delta_min: f64,
    #[arg(long, default_value_t = DEFAULT_COUNTER_MAX, value_parser = clap::value_parser!(u64).range(1..))]
    counter_max: u64,
    #[arg(long, default_value = "ss", value_parser = parse_objective)]
    objective: Objective,
    /// Archive of the violating run to continue from.
    #[arg(long)]
    from: PathBuf,
    /// Directory for one archive per stage.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// R₂ monogamy of Haar-random states, every qubit as focus.
    MonogamyR2(MonogamyArgs),
    /// Squared-concurrence sum inequality on random admissible vectors.
    SumInequality(SumArgs),
}

#[derive(Args, Debug)]
struct MonogamyArgs {
    /// Qubit counts, a single value or an inclusive range such as 3..6.
    #[arg(long, default_value = "3..6", value_parser = parse_qubits)]
    qubits: QubitRange,
    /// States per qubit count.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SumArgs {
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    file: PathBuf,
    /// Defaults to the α the run was made at.
    #[arg(long, value_parser = parse_alpha)]
    alpha: Option<Alpha>,
}

#[derive(Args, Debug)]
struct TraceCsvArgs {
    file: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone)]
struct Schedule(Vec<Alpha>);

#[derive(Debug, Clone, Copy)]
struct QubitRange(usize, usize);

fn parse_alpha(s: &str) -> Result<Alpha, String> {
    let value: f64 = s.parse().map_err(|e| format!("{e}"))?;
    Alpha::new(value).map_err(|e| e.to_string())
}

fn parse_objective(s: &str) -> Result<Objective, String> {
    s.parse().map_err(|e: renyi_core::Error| e.to_string())
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("must be positive and finite, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_schedule(s: &str) -> Result<Schedule, String> {
    let alphas = s
        .split(',')
        .map(|a| parse_alpha(a.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    ContinuationSchedule::new(alphas.clone(), renyi_core::RngSeed::new(0, 0)).map_err(|e| e.to_string())?;
    Ok(Schedule(alphas))
}

fn parse_qubits(s: &str) -> Result<QubitRange, String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| e.to_string());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => (parse(s)?, parse(s)?),
    };
    if lo < 3 || hi > renyi_core::linalg::MAX_QUBITS || lo > hi {
        return Err(format!(
            "need 3 <= first <= last <= {}, got {lo}..{hi}",
            renyi_core::linalg::MAX_QUBITS
        ));
    }
    Ok(QubitRange(lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(summary) => {
            println!("{}", output::round_floats(summary.value));
            if summary.violation {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(commands::Failure::Usage(message)) => {
            use clap::CommandFactory;
            Cli::command()
                .error(clap::error::ErrorKind::ValueValidation, message)
                .exit()
        }
        Err(commands::Failure::Runtime(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(3)
        }
    }
}
