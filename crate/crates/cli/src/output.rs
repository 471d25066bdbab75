//! Result envelopes, manifests and exit codes.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use eulerkit::firstorder::FirstOrderError;
use eulerkit::linode::LinOdeError;
use eulerkit::polyroots::PolyError;
use eulerkit::specfun::SpecFunError;
use eulerkit::variational::VariationalError;
use serde::Serialize;
use serde_json::Value;

pub const EXIT_NUMERIC: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
/// Version of the CSV column conventions.
pub const CSV_SCHEMA: u32 = 1;

/// A failure with the module it came from and the process exit code.
#[derive(Debug, Clone, PartialEq, Serialize, thiserror::Error)]
#[error("{module}: {message}")]
pub struct CliError {
    #[serde(skip)]
    pub code: u8,
    pub module: &'static str,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, module: "cli", kind: "Usage".into(), message: message.into() }
    }

    pub fn from_module(module: &'static str, validation: bool, e: &(impl std::fmt::Debug + std::fmt::Display)) -> Self {
        let debug = format!("{e:?}");
        let kind = debug.split(['(', ' ', '{']).next().unwrap_or_default().to_string();
        Self { code: if validation { EXIT_USAGE } else { EXIT_NUMERIC }, module, kind, message: e.to_string() }
    }
}

fn poly_is_validation(e: &PolyError) -> bool {
    !matches!(e, PolyError::NonConvergence { .. })
}

impl From<LinOdeError> for CliError {
    fn from(e: LinOdeError) -> Self {
        use LinOdeError::*;
        let validation = match &e {
            InvalidEquation(_) | ForcingPresent | ConstantCount { .. } | ConditionCount { .. } | InvalidInput(_) | Schema(_)
            | SingularConditions { .. } => true,
            Roots(p) => poly_is_validation(p),
            ConditionsNotMet { .. } | Quadrature(_) => false,
        };
        Self::from_module("linode", validation, &e)
    }
}

impl From<FirstOrderError> for CliError {
    fn from(e: FirstOrderError) -> Self {
        use FirstOrderError::*;
        let validation = matches!(e, InvalidInput(_) | Domain(_) | DegenerateStart { .. } | ResidualGate { .. });
        Self::from_module("firstorder", validation, &e)
    }
}

impl From<SpecFunError> for CliError {
    fn from(e: SpecFunError) -> Self {
        use SpecFunError::*;
        let validation = matches!(e, Pole(_) | InvalidInput(_) | Domain(_));
        Self::from_module("specfun", validation, &e)
    }
}

impl From<VariationalError> for CliError {
    fn from(e: VariationalError) -> Self {
        use VariationalError::*;
        let validation = matches!(e, InvalidInput(_) | BumpNotPinned { .. });
        Self::from_module("variational", validation, &e)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub params: Value,
    /// Every tolerance and grid size the run actually used.
    pub tolerances: BTreeMap<String, f64>,
    pub csv_schema: u32,
    /// Seconds since the Unix epoch; only written to the sidecar file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

/// What a command produced.
#[derive(Debug, Clone, Default)]
pub struct Run {
    pub tolerances: BTreeMap<String, f64>,
    pub result: Value,
    /// `(file name, contents)` written under `--out`.
    pub csv: Vec<(String, String)>,
    /// Completed, but the result reports a failure (exit 1).
    pub failed: bool,
}

impl Run {
    pub fn new(result: impl Serialize) -> Result<Self, CliError> {
        let result = serde_json::to_value(result).map_err(|e| CliError::usage(format!("serializing result: {e}")))?;
        Ok(Self { result, ..Default::default() })
    }

    pub fn tol(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    pub fn csv(mut self, name: &str, contents: String) -> Self {
        self.csv.push((name.to_string(), contents));
        self
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    manifest: &'a RunManifest,
    result: &'a Value,
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::write(dir.join(name), contents).map_err(|e| CliError::usage(format!("cannot write {}: {e}", dir.join(name).display())))
}

/// Prints the envelope to stdout and, with `out`, writes `result.json`,
/// `manifest.json` (with timestamp) and the CSV files there.
pub fn emit(command: &str, params: Value, run: &Run, out: Option<&Path>) -> Result<(), CliError> {
    let mut manifest = RunManifest {
        tool: "eulerkit",
        version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        params,
        tolerances: run.tolerances.clone(),
        csv_schema: CSV_SCHEMA,
        timestamp: None,
    };
    let body = to_json(&Envelope { manifest: &manifest, result: &run.result });
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| CliError::usage(format!("cannot create {}: {e}", dir.display())))?;
        write(dir, "result.json", &body)?;
        for (name, contents) in &run.csv {
            write(dir, name, contents)?;
        }
        manifest.timestamp = Some(SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
        write(dir, "manifest.json", &to_json(&manifest))?;
    }
    print!("{body}");
    Ok(())
}

pub fn report_error(e: &CliError) {
    eprintln!("{}", serde_json::json!({ "error": e }));
}
