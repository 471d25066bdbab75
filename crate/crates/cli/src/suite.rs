use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use eulerkit::acceptance::{run_suite_observed, SuiteConfig};
use serde::Serialize;

use crate::output::{CliError, Run};
use crate::Global;

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Suite {
    /// Runs the acceptance criteria selected by a config file.
    Acceptance(AcceptanceArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AcceptanceArgs {
    /// `{"seed": .., "groups": [..], "criteria": [..]}`.
    #[arg(long)]
    pub config: PathBuf,
}

pub fn run(cmd: &Suite, global: &Global) -> Result<Run, CliError> {
    let Suite::Acceptance(args) = cmd;
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::usage(format!("cannot read suite config {}: {e}", args.config.display())))?;
    let mut config: SuiteConfig =
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("suite config {}: {e}", args.config.display())))?;
    if let Some(seed) = global.seed {
        config.seed = seed;
    }
    let report = run_suite_observed(&config, |c| {
        eprintln!("criterion {:>2} {:<28} {}", c.id, c.name, if c.passed { "pass" } else { "FAIL" });
    })
    .map_err(|e| CliError::usage(e.to_string()))?;

    let mut csv = String::from("id,name,check,value,relation,limit,passed\n");
    let mut run = Run::new(&report)?;
    for c in &report.criteria {
        for k in &c.checks {
            let relation = k.relation.map(|r| serde_json::to_value(r).expect("relations serialize"));
            let relation = relation.as_ref().and_then(|r| r.as_str()).unwrap_or("");
            let limit = k.limit.map(|l| format!("{l:e}")).unwrap_or_default();
            writeln!(csv, "{},{},{},{:e},{relation},{limit},{}", c.id, c.name, k.name, k.value, k.passed).expect("writing to a String");
            if let Some(l) = k.limit {
                run = run.tol(&format!("criterion_{:02}.{}", c.id, k.name), l);
            }
        }
    }
    run = run.csv("acceptance.csv", csv);
    run.failed = !report.passed;
    Ok(run)
}
