//! `eulerkit` command-line front end. Results go to stdout as JSON; `--out`
//! additionally writes them, a timestamped manifest and CSV files to a directory.

mod first;
mod formula;
mod ode;
mod output;
mod specfun;
mod suite;
mod var;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use output::{emit, report_error, CliError, EXIT_NUMERIC};

#[derive(Debug, Parser)]
#[command(name = "eulerkit", version, about = "ODE, special-function and variational solvers")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Global {
    /// Directory for result.json, manifest.json and CSV files.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Overrides the command's main tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Overrides the command's grid or sample count.
    #[arg(long = "grid-n", global = true)]
    pub grid_n: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Linear constant-coefficient equations.
    #[command(subcommand)]
    Ode(ode::Ode),
    /// First-order equations.
    #[command(subcommand)]
    First(first::First),
    /// Gamma, Beta and Bessel functions.
    #[command(subcommand)]
    Specfun(specfun::Specfun),
    /// Direct variational methods.
    #[command(subcommand)]
    Var(var::Var),
    /// Acceptance suite.
    #[command(subcommand)]
    Suite(suite::Suite),
}

impl Command {
    fn name(&self) -> String {
        let value = serde_json::to_value(self).expect("commands serialize");
        let (group, inner) = value.as_object().and_then(|o| o.iter().next()).expect("externally tagged");
        format!("{group} {}", inner["op"].as_str().unwrap_or_default())
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let g = &cli.global;
    let run = match &cli.command {
        Command::Ode(c) => ode::run(c, g)?,
        Command::First(c) => first::run(c, g)?,
        Command::Specfun(c) => specfun::run(c, g)?,
        Command::Var(c) => var::run(c, g)?,
        Command::Suite(c) => suite::run(c, g)?,
    };
    let params = json!({"global": g, "command": cli.command});
    emit(&cli.command.name(), params, &run, g.out.as_deref())?;
    Ok(!run.failed)
}

fn allow_negative_numbers(cmd: clap::Command) -> clap::Command {
    cmd.allow_negative_numbers(true).mut_subcommands(allow_negative_numbers)
}

fn main() -> ExitCode {
    let matches = match allow_negative_numbers(Cli::command()).try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_NUMERIC),
        Err(e) => {
            report_error(&e);
            ExitCode::from(e.code)
        }
    }
}
