mod args;
mod eval;
mod output;
mod rapidity;
mod scan;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Cyclic hypergeometric series at roots of unity.
#[derive(Debug, Parser)]
#[command(name = "cyclichyp", version)]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    /// Write results to this file instead of stdout.
    #[arg(long, short, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a single quantity.
    #[command(subcommand)]
    Eval(eval::EvalCommand),
    /// Check an identity on seeded random parameters.
    Verify(verify::VerifyArgs),
    /// Compare the region classifier with the numerically matched phase on a grid of beta.
    ScanRegions(scan::ScanArgs),
    /// Solve for a point on the chiral Potts rapidity curve.
    Rapidity(rapidity::RapidityArgs),
}

/// Outcome of a command that ran to completion.
pub enum Status {
    Pass,
    Fail,
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    let mut out = output::open(cli.output.as_deref())?;
    let status = match cli.command {
        Command::Eval(cmd) => eval::run(cmd, cli.json, &mut *out)?,
        Command::Verify(a) => verify::run(a, &mut *out)?,
        Command::ScanRegions(a) => scan::run(a, cli.json, &mut *out)?,
        Command::Rapidity(a) => rapidity::run(a, cli.json, &mut *out)?,
    };
    out.flush()?;
    Ok(status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
