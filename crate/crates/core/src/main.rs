use std::process::ExitCode;
use std::time::{Instant, SystemTime};

use clap::{Parser, Subcommand};

use proxmatch::experiments::{
    parse_config, run, write_outputs, EnumerateArgs, ExactArgs, GlobalArgs, LineArgs, RpmpArgs,
    SuiteArgs, ValidateArgs,
};

/// Stable matching experiments: hypercube profiles, Poisson points on the
/// line, and exact greedy expectations.
#[derive(Parser, Debug)]
#[command(name = "proxmatch", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Random profile markets on the hypercube.
    Rpmp(RpmpArgs),
    /// Poisson passengers and cabs on a line.
    Line(LineArgs),
    /// Exact greedy costs and odd-partition weights.
    Exact(ExactArgs),
    /// All stable matchings of an instance file.
    Enumerate(EnumerateArgs),
    /// Run the acceptance criteria.
    Validate(ValidateArgs),
}

const USAGE_ERROR: u8 = 2;
const CRITERION_FAILURE: u8 = 1;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let args = match cli.command {
        Command::Rpmp(a) => SuiteArgs::Rpmp(a),
        Command::Line(a) => SuiteArgs::Line(a),
        Command::Exact(a) => SuiteArgs::Exact(a),
        Command::Enumerate(a) => SuiteArgs::Enumerate(a),
        Command::Validate(a) => SuiteArgs::Validate(a),
    };
    let cfg = match parse_config(&cli.global, &args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_ERROR);
        }
    };
    if let Some(threads) = cfg.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot start {threads} threads: {e}");
            return ExitCode::from(USAGE_ERROR);
        }
    }
    let started = SystemTime::now();
    let clock = Instant::now();
    let output = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_ERROR);
        }
    };
    match write_outputs(&cfg, &output, started, clock.elapsed()) {
        Ok(Some(manifest)) => eprintln!("manifest written to {}", manifest.display()),
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_ERROR);
        }
    }
    if output.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(CRITERION_FAILURE)
    }
}
