//! `selfsim`: batch front-end for the selfsim library.
//!
//! Exit codes: 0 certified or success, 2 inconclusive, 1 error.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Outcome, Run, EXIT_ERROR};

#[derive(Parser, Debug)]
#[command(name = "selfsim", version, about = "Singular integrals on self-similar sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "SELFSIM_THREADS")]
    threads: Option<usize>,

    /// Seed for sampling commands; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// `key=value` applied to the config before it is read; dotted keys
    /// reach into nested objects.
    #[arg(long = "override", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(clap::Args, Debug)]
struct ConfigArg {
    /// JSON config, or a JSON report from an earlier run.
    config: PathBuf,
}

#[derive(clap::Args, Debug)]
struct TraceArgs {
    config: PathBuf,
    /// Emit JSON instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(clap::Args, Debug)]
struct BirkhoffArgs {
    config: PathBuf,
    /// Emit the hitting times as CSV instead of the frequency summary.
    #[arg(long)]
    hits: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Similarity dimension and residual.
    Dim(ConfigArg),
    /// Certified separation check.
    Separation(ConfigArg),
    /// Quadrature of an integrand against the natural measure.
    Integrate(ConfigArg),
    /// Symbolic principal-value trace as CSV.
    PvTrace(TraceArgs),
    /// Truncated singular integral at a point.
    Truncated(ConfigArg),
    /// Periodic-point criterion integral.
    Criterion(ConfigArg),
    /// Symbolic maximal estimate.
    Maximal(ConfigArg),
    /// Ball-versus-cylinder annulus gap.
    Gap(ConfigArg),
    /// Birkhoff frequencies and hitting times along a random orbit.
    Birkhoff(BirkhoffArgs),
    /// Bump perturbation of the kernel.
    Perturb(ConfigArg),
    /// Finite-horizon divergence certificate.
    Divergence(ConfigArg),
}

impl Command {
    fn parts(&self) -> (&'static str, &PathBuf, bool, bool) {
        match self {
            Command::Dim(a) => ("dim", &a.config, false, false),
            Command::Separation(a) => ("separation", &a.config, false, false),
            Command::Integrate(a) => ("integrate", &a.config, false, false),
            Command::PvTrace(a) => ("pv-trace", &a.config, a.json, false),
            Command::Truncated(a) => ("truncated", &a.config, false, false),
            Command::Criterion(a) => ("criterion", &a.config, false, false),
            Command::Maximal(a) => ("maximal", &a.config, false, false),
            Command::Gap(a) => ("gap", &a.config, false, false),
            Command::Birkhoff(a) => ("birkhoff", &a.config, false, a.hits),
            Command::Perturb(a) => ("perturb", &a.config, false, false),
            Command::Divergence(a) => ("divergence", &a.config, false, false),
        }
    }
}

fn configure_threads(threads: Option<usize>) -> Result<(), String> {
    match threads {
        Some(0) => Err("--threads must be at least 1".into()),
        #[cfg(feature = "parallel")]
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string()),
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(()),
        None => Ok(()),
    }
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    configure_threads(cli.threads)?;
    let (command, path, json, hits) = cli.command.parts();
    let (cfg, raw) = config::load(path, &cli.overrides, cli.seed).map_err(|e| e.to_string())?;
    Run { command, cfg, raw, json, hits }.execute().map_err(|e| e.to_string())
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_ERROR as u8,
            };
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(outcome) => match emit(&cli.out, &outcome.text) {
            Ok(()) => ExitCode::from(outcome.code as u8),
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                ExitCode::from(EXIT_ERROR as u8)
            }
        },
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
