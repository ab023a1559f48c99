use clap::{Parser, Subcommand};
use onepmac_cli::{
    cmd_census, cmd_interference, cmd_membership, cmd_scan_counterexample, cmd_violate, cmd_witness, CliError, Format,
    Report, RunConfig,
};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Single-particle multiple-access channels: polytopes, violations and
/// coherence witnesses.
///
/// Exit codes: 0 success, 1 claim not certified, 2 input error.
#[derive(Parser)]
#[command(name = "onepmac", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Numerical tolerance for input validation and rank cutoffs.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Grid steps per 2π for phase scans.
    #[arg(long, global = true, default_value_t = 200)]
    grid: usize,
    /// Seed for randomized cross-checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Run past the size guards.
    #[arg(long, global = true)]
    force: bool,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Facet census of the K-local polytope over N binary parties.
    Census { n: usize, k: usize },
    /// Optimal fingerprinting violation for N paths.
    Violate {
        n: usize,
        /// Random phase vectors to compare against the optimum.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Exact membership of a MAC (JSON file) in the K-local polytope.
    Membership { mac: PathBuf, k: usize },
    /// (K+1)-level coherence certificate for a state (JSON file).
    Witness { state: PathBuf, k: usize },
    /// Interference of a set of parties (1-based) in a MAC.
    Interference {
        mac: PathBuf,
        #[arg(required = true, num_args = 1..)]
        parties: Vec<usize>,
    },
    /// Phase scan of the three-party facet classes on the counterexample
    /// state, or on a given three-level state.
    ScanCounterexample {
        #[arg(long)]
        state: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("ONEPMAC_THREADS") {
        let n: usize = v.parse().map_err(|_| CliError::Usage(format!("ONEPMAC_THREADS={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    configure_threads()?;
    let cfg = RunConfig { tol: cli.tol, grid: cli.grid, seed: cli.seed, format: cli.format, force: cli.force };
    cfg.validate()?;
    match &cli.command {
        Command::Census { n, k } => cmd_census(*n, *k, &cfg),
        Command::Violate { n, samples } => cmd_violate(*n, *samples, &cfg),
        Command::Membership { mac, k } => cmd_membership(mac, *k, &cfg),
        Command::Witness { state, k } => cmd_witness(state, *k, &cfg),
        Command::Interference { mac, parties } => cmd_interference(mac, parties, &cfg),
        Command::ScanCounterexample { state } => cmd_scan_counterexample(state.as_deref(), &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let body = report.render(cli.format);
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, format!("{body}\n")) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else if let Err(e) = writeln!(std::io::stdout().lock(), "{body}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: stdout: {e}");
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
