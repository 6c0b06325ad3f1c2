//! `fqap`: build measures, transform them, count progressions and run the
//! decomposition, plane-sampling, energy and content diagnostics.
//!
//! Exit codes: 0 success, 1 output I/O failure, 2 usage or precondition
//! failure, 3 failed internal check.

mod commands;
mod config;
mod manifest;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::Output;
use config::{Ctx, Params};

#[derive(Parser)]
#[command(name = "fqap", version, about = "Progression counting and Fourier diagnostics over F_q^d")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a haar-ball, capset or cascade measure and its support.
    MakeMeasure(Params),
    /// Spectrum CSV (plus `.exact` sidecar in exact mode).
    Transform(Params),
    /// Progression counts for a set or the support of a measure.
    CountAps(Params),
    /// Split the separated trilinear form into its zero and nonzero parts.
    Decompose(Params),
    /// Count progression-rich affine planes.
    Varnavides(Params),
    /// Spatial and spectral energies.
    Energy(Params),
    /// Hausdorff content and ball-condition constant.
    Content(Params),
    /// Time the naive and fast transforms.
    Bench(Params),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    /// A check failed after the output was produced.
    Identity { message: String, output: Output },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError::Io(msg.into())
    }
}

impl From<fqap::Error> for CliError {
    fn from(e: fqap::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl std::fmt::Debug for Output {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Output").field("files", &self.files).finish()
    }
}

type Runner = fn(&mut Ctx) -> Result<Output, CliError>;

fn dispatch(command: Command) -> (&'static str, Params, &'static [&'static str], Runner) {
    use commands as c;
    match command {
        Command::MakeMeasure(p) => ("make-measure", p, c::MAKE_MEASURE, c::make_measure),
        Command::Transform(p) => ("transform", p, c::TRANSFORM, c::transform),
        Command::CountAps(p) => ("count-aps", p, c::COUNT_APS, c::count_aps),
        Command::Decompose(p) => ("decompose", p, c::DECOMPOSE, c::decompose),
        Command::Varnavides(p) => ("varnavides", p, c::VARNAVIDES, c::varnavides),
        Command::Energy(p) => ("energy", p, c::ENERGY, c::energy),
        Command::Content(p) => ("content", p, c::CONTENT, c::content),
        Command::Bench(p) => ("bench", p, c::BENCH, c::bench),
    }
}

fn publish(ctx: &Ctx, out: &Output, started: Instant) -> Result<(), CliError> {
    print!("{}", out.stdout);
    std::io::stdout().flush().ok();
    manifest::write(ctx, &out.files, started.elapsed().as_secs_f64())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let started = Instant::now();
    let (name, params, allowed, runner) = dispatch(cli.command);
    let mut ctx = Ctx::new(name, &params, allowed)?;
    match runner(&mut ctx) {
        Ok(out) => publish(&ctx, &out, started),
        Err(CliError::Identity { message, output }) => {
            publish(&ctx, &output, started)?;
            Err(CliError::Identity { message, output })
        }
        Err(e) => Err(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Identity { message, .. }) => {
            eprintln!("check failed: {message}");
            ExitCode::from(3)
        }
    }
}
