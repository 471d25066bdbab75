use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use eulerkit::linode::{
    beam_closed_form, characteristic_polynomial, fit_constants, forced_oscillator, linspace, reduce_nonhomogeneous_2nd,
    residual, solve_beam, solve_homogeneous, Condition, ConstCoeffOde, SolutionDoc, WithConstants, REDUCTION_QUAD_TOL,
};
use eulerkit::numeric::{integrate_ivp_observed, IvpOptions};
use serde::Serialize;
use serde_json::{json, Value};

use crate::formula::Formula;
use crate::output::{CliError, Run};
use crate::Global;

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Ode {
    /// General solution of a homogeneous constant-coefficient equation,
    /// optionally fitted to conditions.
    Solve(SolveArgs),
    /// Evaluates a solution document and its derivatives.
    Eval(EvalArgs),
    /// Transverse deflection of a bar hanging from one end.
    Beam(BeamArgs),
    /// Forced undamped oscillator from rest.
    Oscillator(OscillatorArgs),
    /// Second-order forced equation by reduction to first order.
    Reduce2(ReduceArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolveArgs {
    /// Coefficients of y, y', y'', ... (lowest order first).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub coeffs: Vec<f64>,
    /// `at:order:value`, e.g. `0:1:-2` for y'(0) = -2. Repeat once per constant.
    #[arg(long = "cond", allow_hyphen_values = true)]
    pub conditions: Vec<String>,
    /// Residual grid interval.
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub to: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalArgs {
    /// Solution document, or the output of `ode solve`.
    #[arg(long)]
    pub solution: PathBuf,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
    /// Highest derivative to report.
    #[arg(long, default_value_t = 0)]
    pub order: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BeamArgs {
    #[arg(long = "K")]
    pub k: f64,
    #[arg(long)]
    pub l: f64,
    #[arg(long = "A", default_value_t = 1.0, allow_hyphen_values = true)]
    pub a: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OscillatorArgs {
    #[arg(long = "M")]
    pub m: f64,
    #[arg(long = "K")]
    pub k: f64,
    #[arg(long = "F", allow_hyphen_values = true)]
    pub f: f64,
    /// Driving frequency.
    #[arg(long)]
    pub wa: f64,
    #[arg(long)]
    pub t: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReduceArgs {
    /// `C y'' + B y' + A y = X(x)`.
    #[arg(long = "C", allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long = "A", allow_hyphen_values = true)]
    pub a: f64,
    /// X as an expression in x.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub forcing: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub y0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub yp0: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
}

const DEFAULT_GRID_N: usize = 101;
const DEFAULT_IVP_TOL: f64 = 1e-12;

fn parse_condition(text: &str) -> Result<Condition, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliError::usage(format!("condition {text:?} is not at:order:value"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let at: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let order: usize = parts[1].trim().parse().map_err(|_| bad())?;
    let equals: f64 = parts[2].trim().parse().map_err(|_| bad())?;
    Ok(Condition::derivative(at, order, equals))
}

pub fn run(cmd: &Ode, global: &Global) -> Result<Run, CliError> {
    match cmd {
        Ode::Solve(a) => solve(a, global),
        Ode::Eval(a) => eval(a),
        Ode::Beam(a) => beam(a, global),
        Ode::Oscillator(a) => oscillator(a, global),
        Ode::Reduce2(a) => reduce2(a, global),
    }
}

fn solve(args: &SolveArgs, global: &Global) -> Result<Run, CliError> {
    let grid_n = global.grid_n.unwrap_or(DEFAULT_GRID_N);
    let ode = ConstCoeffOde::new(args.coeffs.clone())?;
    let gs = solve_homogeneous(&ode)?;
    let conditions = args.conditions.iter().map(|c| parse_condition(c)).collect::<Result<Vec<_>, _>>()?;
    let grid = linspace(args.from, args.to, grid_n);
    let roots: Vec<Value> = gs
        .clusters()
        .iter()
        .map(|c| json!({"re": c.value.re, "im": c.value.im, "multiplicity": c.multiplicity}))
        .collect();
    let (doc, residual_max, condition_estimate) = if conditions.is_empty() {
        let ones = vec![1.0; gs.free_constants()];
        let r = residual(&ode, &WithConstants { general: &gs, constants: &ones }, &grid)?;
        (SolutionDoc::from_solution(&gs, None)?, r, None)
    } else {
        let p = fit_constants(&gs, &conditions)?;
        let r = residual(&ode, &p, &grid)?;
        (SolutionDoc::from_solution(&gs, Some(&p.constants))?, r, Some(p.condition_estimate))
    };
    let result = json!({
        "order": ode.order(),
        "characteristic_polynomial": characteristic_polynomial(&ode).coeffs(),
        "roots": roots,
        "solution": doc,
        "residual": {"interval": [args.from, args.to], "max": residual_max,
            "constants": if conditions.is_empty() { "all one" } else { "fitted" }},
        "condition_estimate": condition_estimate,
    });
    Ok(Run::new(result)?.tol("grid_n", grid_n as f64))
}

fn read_solution(path: &PathBuf) -> Result<SolutionDoc, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let doc = value.pointer("/result/solution").cloned().unwrap_or(value);
    serde_json::from_value(doc).map_err(|e| CliError::usage(format!("{}: not a solution document: {e}", path.display())))
}

fn eval(args: &EvalArgs) -> Result<Run, CliError> {
    let doc = read_solution(&args.solution)?;
    let (gs, constants) = doc.to_solution()?;
    let constants = constants.ok_or_else(|| CliError::usage("the solution document has no constants to evaluate with"))?;
    let mut points = Vec::new();
    let mut csv = String::from("x");
    for k in 0..=args.order {
        write!(csv, ",d{k}").expect("writing to a String");
    }
    csv.push('\n');
    for &x in &args.x {
        let ev = gs.evaluate(&constants, x, args.order)?;
        write!(csv, "{x}").expect("writing to a String");
        for d in &ev.derivatives {
            write!(csv, ",{d}").expect("writing to a String");
        }
        csv.push('\n');
        points.push(json!({"x": x, "derivatives": ev.derivatives, "overflow": ev.overflow}));
    }
    Ok(Run::new(json!({"order": doc.order, "points": points}))?.csv("eval.csv", csv))
}

fn beam(args: &BeamArgs, global: &Global) -> Result<Run, CliError> {
    let grid_n = global.grid_n.unwrap_or(DEFAULT_GRID_N);
    let sol = solve_beam(args.k, args.l, args.a)?;
    let grid = linspace(0.0, args.l, grid_n);
    let r = residual(&sol.ode, &sol.solution, &grid)?;
    let free = sol.solution.evaluate(0.0, 3).derivatives;
    let end = sol.solution.evaluate(args.l, 0).derivatives[0];
    let mut csv = String::from("x,y,y_closed_form\n");
    let mut closed_gap = 0.0f64;
    for &x in &grid {
        let y = sol.solution.evaluate(x, 0).derivatives[0];
        let c = beam_closed_form(args.k, args.l, args.a, x);
        closed_gap = closed_gap.max((y - c).abs());
        writeln!(csv, "{x},{y},{c}").expect("writing to a String");
    }
    let result = json!({
        "b": sol.b,
        "residual": {"grid_n": grid_n, "max": r},
        "end_deflection": end,
        "free_end": {"y2": free[2], "y3": free[3]},
        "closed_form_max_difference": closed_gap,
        "solution": SolutionDoc::from_solution(&sol.solution.general, Some(&sol.solution.constants))?,
    });
    Ok(Run::new(result)?.tol("grid_n", grid_n as f64).csv("beam.csv", csv))
}

fn oscillator(args: &OscillatorArgs, global: &Global) -> Result<Run, CliError> {
    let grid_n = global.grid_n.unwrap_or(DEFAULT_GRID_N);
    let resp = forced_oscillator(args.m, args.k, args.f, args.wa, args.t)?;
    let mut csv = String::from("t,x\n");
    for t in linspace(0.0, args.t, grid_n) {
        writeln!(csv, "{t},{}", forced_oscillator(args.m, args.k, args.f, args.wa, t)?.value).expect("writing to a String");
    }
    let result = json!({
        "value": resp.value,
        "steady_amplitude": if resp.resonant { Value::Null } else { json!(resp.steady_amplitude) },
        "resonant": resp.resonant,
        "natural_frequency": resp.natural_frequency,
        "frequency_ratio": args.wa / resp.natural_frequency,
    });
    Ok(Run::new(result)?.tol("grid_n", grid_n as f64).tol("resonance_threshold", eulerkit::linode::RESONANCE_THRESHOLD).csv("oscillator.csv", csv))
}

fn reduce2(args: &ReduceArgs, global: &Global) -> Result<Run, CliError> {
    let tol = global.tol.unwrap_or(DEFAULT_IVP_TOL);
    let forcing = Formula::func1(&args.forcing, "x")?;
    let (c, b, a) = (args.c, args.b, args.a);
    let mut points = Vec::new();
    let mut csv = String::from("x,y,y_ivp\n");
    for &x in &args.x {
        let y = reduce_nonhomogeneous_2nd(c, b, a, &|t| forcing(t), args.x0, args.y0, args.yp0, x)?;
        let mut last = args.y0;
        if x != args.x0 {
            integrate_ivp_observed(
                |t, u, d| {
                    d[0] = u[1];
                    d[1] = (forcing(t) - b * u[1] - a * u[0]) / c;
                },
                args.x0,
                &[args.y0, args.yp0],
                x,
                IvpOptions::new(tol),
                |_, u| {
                    last = u[0];
                    true
                },
            )
            .map_err(|e| CliError::from_module("numeric", false, &e))?;
        }
        writeln!(csv, "{x},{y},{last}").expect("writing to a String");
        points.push(json!({"x": x, "y": y, "ivp": last, "difference": (y - last).abs()}));
    }
    Ok(Run::new(json!({"points": points}))?.tol("ivp_tol", tol).tol("reduction_quad_tol", REDUCTION_QUAD_TOL).csv("reduce2.csv", csv))
}
