use std::path::PathBuf;

use clap::{Args, Subcommand};
use eulerkit::variational::{
    discretize, euler_system_residual, fundamental_lemma_probe, run_problem, variation_gradient_check, DiscretePath,
    MinimizeOptions, ProblemConfig, ProblemEndpoints, SplinePath, StepRule,
};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::output::{CliError, Run};
use crate::Global;

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Var {
    /// Minimizes a discretized functional from the straight path.
    Minimize(ProblemArgs),
    /// Residual diagnostics for a given path.
    Residual(ResidualArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProblemArgs {
    /// Problem file `{functional, params, N, endpoints, optimizer}`.
    #[arg(long, conflicts_with_all = ["functional", "n"])]
    pub config: Option<PathBuf>,
    /// dirichlet, arclength, brachistochrone or geodesic.
    #[arg(long)]
    pub functional: Option<String>,
    /// Number of intervals.
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t0: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub t1: f64,
    /// Start point, one value per coordinate.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Vec<f64>,
    /// End point.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub b: Vec<f64>,
    /// `key=value` functional parameter; repeatable.
    #[arg(long = "param")]
    pub params: Vec<String>,
    /// lbfgs or gd.
    #[arg(long = "step-rule")]
    pub step_rule: Option<String>,
    /// L-BFGS history length.
    #[arg(long)]
    pub memory: Option<usize>,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ResidualArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub problem: ProblemArgs,
    /// `t,x0[,x1..]` CSV on a uniform grid, as written by `var minimize --out`.
    #[arg(long)]
    pub path: PathBuf,
}

const VARIATION_STEP: f64 = 1e-4;
const VARIATION_BUMPS: usize = 10;
const LEMMA_BUMPS: usize = 10;

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn problem(args: &ProblemArgs, global: &Global, default_n: Option<usize>) -> Result<ProblemConfig, CliError> {
    let mut config = match &args.config {
        Some(path) => serde_json::from_str::<ProblemConfig>(&read(path)?)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?,
        None => {
            let functional = args.functional.clone().ok_or_else(|| CliError::usage("need --config or --functional"))?;
            let n = args.n.or(default_n).ok_or_else(|| CliError::usage("need --N"))?;
            let mut params = Map::new();
            for p in &args.params {
                let (k, v) = p.split_once('=').ok_or_else(|| CliError::usage(format!("parameter {p:?} is not key=value")))?;
                let v = v.parse::<f64>().map_or_else(|_| Value::String(v.to_string()), |x| json!(x));
                params.insert(k.to_string(), v);
            }
            ProblemConfig {
                functional,
                params,
                n,
                endpoints: ProblemEndpoints { t0: args.t0, t1: args.t1, a: args.a.clone(), b: args.b.clone() },
                optimizer: MinimizeOptions::default(),
            }
        }
    };
    let opt = &mut config.optimizer;
    match args.step_rule.as_deref() {
        None => {}
        Some("gd") => opt.step_rule = StepRule::GradientDescent,
        Some("lbfgs") => opt.step_rule = StepRule::Lbfgs { memory: args.memory.unwrap_or(10) },
        Some(other) => return Err(CliError::usage(format!("unknown step rule {other}; use lbfgs or gd"))),
    }
    if let (Some(m), StepRule::Lbfgs { memory }) = (args.memory, &mut opt.step_rule) {
        *memory = m;
    }
    if let Some(m) = args.max_iter {
        opt.max_iter = m;
    }
    if let Some(t) = global.tol {
        opt.grad_tol = t;
    }
    Ok(config)
}

fn tolerances(run: Run, config: &ProblemConfig) -> Run {
    let run = run.tol("N", config.n as f64).tol("grad_tol", config.optimizer.grad_tol).tol("max_iter", config.optimizer.max_iter as f64);
    match config.optimizer.step_rule {
        StepRule::Lbfgs { memory } => run.tol("lbfgs_memory", memory as f64),
        StepRule::GradientDescent => run,
    }
}

pub fn run(cmd: &Var, global: &Global) -> Result<Run, CliError> {
    match cmd {
        Var::Minimize(a) => minimize(a, global),
        Var::Residual(a) => residual(a, global),
    }
}

fn nodes(path: &DiscretePath) -> Vec<Vec<f64>> {
    (0..=path.n).map(|k| std::iter::once(path.t(k)).chain(path.node(k).iter().copied()).collect()).collect()
}

fn minimize(args: &ProblemArgs, global: &Global) -> Result<Run, CliError> {
    let config = problem(args, global, None)?;
    let (result, summary) = run_problem(&config)?;
    let mut history = String::from("iteration,objective\n");
    for (i, v) in result.history.iter().enumerate() {
        history.push_str(&format!("{i},{v}\n"));
    }
    let out = json!({"problem": config, "summary": summary, "nodes": nodes(&result.path)});
    let mut run = Run::new(out)?.csv("path.csv", result.path.to_csv()).csv("history.csv", history);
    run.failed = !summary.converged;
    Ok(tolerances(run, &config))
}

fn parse_path(text: &str, t0: f64, t1: f64) -> Result<DiscretePath, CliError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| CliError::usage("path file is empty"))?;
    let dim = header.split(',').count().saturating_sub(1);
    if dim == 0 || !header.starts_with('t') {
        return Err(CliError::usage("path header must be t,x0[,x1..]"));
    }
    let mut ordinates = Vec::new();
    let mut rows = 0usize;
    for (i, line) in lines.enumerate() {
        let vals = line.split(',').map(|v| v.trim().parse::<f64>()).collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::usage(format!("path row {}: {e}", i + 1)))?;
        if vals.len() != dim + 1 {
            return Err(CliError::usage(format!("path row {} has {} columns, expected {}", i + 1, vals.len(), dim + 1)));
        }
        ordinates.extend_from_slice(&vals[1..]);
        rows += 1;
    }
    if rows < 3 {
        return Err(CliError::usage("path needs at least 3 nodes"));
    }
    Ok(DiscretePath { t0, t1, n: rows - 1, dim, ordinates })
}

fn residual(args: &ResidualArgs, global: &Global) -> Result<Run, CliError> {
    let text = read(&args.path)?;
    let rows = text.lines().filter(|l| !l.trim().is_empty()).count();
    let config = problem(&args.problem, global, Some(rows.saturating_sub(2)))?;
    let functional = config.functional()?;
    let path = parse_path(&text, functional.t0, functional.t1)?;
    let objective = discretize(&functional, path.n)?;
    objective.check_path(&path)?;
    let grad = objective.gradient(&path);
    let h = objective.h();
    let span = path.t1 - path.t0;
    let middle: Vec<f64> = path.times().into_iter().filter(|&t| t >= path.t0 + 0.2 * span && t <= path.t0 + 0.8 * span).collect();
    let el = euler_system_residual(&functional, &SplinePath::new(&path), &middle)?;
    let seed = global.seed.unwrap_or(0);
    let variation = variation_gradient_check(&objective, &path, VARIATION_STEP, VARIATION_BUMPS, seed)?;
    // discrete residual grad_k / h, piecewise linear in t, per coordinate
    let d = path.dim;
    let mut lemma = 0.0f64;
    for i in 0..d {
        let g: Vec<f64> = (0..=path.n).map(|k| grad[k * d + i] / h).collect();
        let n = path.n;
        let phi = move |t: f64| {
            let s = ((t - path.t0) / h).clamp(0.0, n as f64 - 1e-9);
            let k = s.floor() as usize;
            let w = s - k as f64;
            (1.0 - w) * g[k] + w * g[k + 1]
        };
        lemma = lemma.max(fundamental_lemma_probe(&phi, path.t0, path.t1, LEMMA_BUMPS)?.max_normalized);
    }
    let out = json!({
        "objective": objective.value(&path),
        "grad_norm": grad.iter().fold(0.0f64, |m, g| m.max(g.abs())),
        "el_residual_middle": el,
        "variation_check": variation,
        "lemma_probe_normalized": lemma,
    });
    let run = Run::new(out)?
        .tol("variation_step", VARIATION_STEP)
        .tol("variation_bumps", VARIATION_BUMPS as f64)
        .tol("lemma_bumps", LEMMA_BUMPS as f64)
        .tol("seed", seed as f64)
        .tol("N", path.n as f64);
    Ok(run)
}
