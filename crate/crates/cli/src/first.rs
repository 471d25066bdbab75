use std::fmt::Write as _;

use clap::{Args, Subcommand};
use eulerkit::firstorder::{
    clairaut_envelope, exactness_check, polyline_csv, riccati_linearize, solve_separable, ClairautFamily, PlaneField, Rect,
    RiccatiParticular, DEGENERACY_THRESHOLD, DERIVATION_TOL, EXACTNESS_STEP_FRACTION, RESIDUAL_GATE,
};
use serde::Serialize;
use serde_json::json;

use crate::formula::Formula;
use crate::output::{CliError, Run};
use crate::Global;

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum First {
    /// Tests `M dx + N dy = 0` for exactness on a rectangle.
    Exact(ExactArgs),
    /// Traces the level set of `dx / f(x) = g(y) dy` through a seed.
    Separable(SeparableArgs),
    /// Envelope of the lines `y = p x + g(p)`.
    Clairaut(ClairautArgs),
    /// `z' + z^2 = a x^n` from a known particular solution.
    Riccati(RiccatiArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExactArgs {
    /// M(x, y).
    #[arg(long, allow_hyphen_values = true)]
    pub m: String,
    /// N(x, y).
    #[arg(long, allow_hyphen_values = true)]
    pub n: String,
    /// `x_lo,x_hi,y_lo,y_hi`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1, required = true)]
    pub rect: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeparableArgs {
    /// f(x).
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    /// g(y).
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub y0: f64,
    #[arg(long = "x-end", allow_hyphen_values = true)]
    pub x_end: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ClairautArgs {
    /// g(p).
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
    /// g'(p).
    #[arg(long, allow_hyphen_values = true)]
    pub dg: String,
    /// g''(p); central differences of g' when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub d2g: Option<String>,
    /// `p_lo,p_hi`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub p: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RiccatiArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub n: f64,
    /// Particular solution v(x).
    #[arg(long, allow_hyphen_values = true)]
    pub v: String,
    /// v'(x); central differences of v when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub dv: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub z0: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
}

const DEFAULT_EXACT_GRID_N: usize = 21;
const DEFAULT_EXACT_TOL: f64 = 1e-6;
const DEFAULT_SAMPLES: usize = 21;
const DEFAULT_ENVELOPE_SAMPLES: usize = 101;

pub fn run(cmd: &First, global: &Global) -> Result<Run, CliError> {
    match cmd {
        First::Exact(a) => exact(a, global),
        First::Separable(a) => separable(a, global),
        First::Clairaut(a) => clairaut(a, global),
        First::Riccati(a) => riccati(a),
    }
}

fn exact(args: &ExactArgs, global: &Global) -> Result<Run, CliError> {
    let [x_lo, x_hi, y_lo, y_hi] = args.rect[..] else {
        return Err(CliError::usage("--rect takes four numbers x_lo,x_hi,y_lo,y_hi"));
    };
    let (grid_n, tol) = (global.grid_n.unwrap_or(DEFAULT_EXACT_GRID_N), global.tol.unwrap_or(DEFAULT_EXACT_TOL));
    let field = PlaneField::new(Formula::func2(&args.m, "x", "y")?, Formula::func2(&args.n, "x", "y")?, Rect::new(x_lo, x_hi, y_lo, y_hi)?);
    let r = exactness_check(&field, grid_n, tol)?;
    let result = json!({
        "exact": r.exact,
        "max_deviation": r.max_deviation,
        "worst_at": [r.worst_at.0, r.worst_at.1],
        "excluded": r.excluded.iter().map(|p| [p.0, p.1]).collect::<Vec<_>>(),
        "step": [r.step.0, r.step.1],
    });
    Ok(Run::new(result)?.tol("grid_n", grid_n as f64).tol("tol", tol).tol("step_fraction", EXACTNESS_STEP_FRACTION))
}

fn separable(args: &SeparableArgs, global: &Global) -> Result<Run, CliError> {
    let samples = global.grid_n.unwrap_or(DEFAULT_SAMPLES);
    let sol = solve_separable(Formula::func1(&args.f, "x")?, Formula::func1(&args.g, "y")?, args.x0, args.y0)?;
    let points = sol.trace(args.x_end, samples)?;
    let result = json!({
        "seed": [args.x0, args.y0],
        "points": points.iter().map(|p| [p.0, p.1]).collect::<Vec<_>>(),
    });
    Ok(Run::new(result)?.tol("samples", samples as f64).csv("separable.csv", polyline_csv(&points)))
}

fn clairaut(args: &ClairautArgs, global: &Global) -> Result<Run, CliError> {
    let [p0, p1] = args.p[..] else {
        return Err(CliError::usage("--p takes two numbers p_lo,p_hi"));
    };
    let samples = global.grid_n.unwrap_or(DEFAULT_ENVELOPE_SAMPLES);
    let mut family = ClairautFamily::new(Formula::func1(&args.g, "p")?, Formula::func1(&args.dg, "p")?);
    if let Some(d2g) = &args.d2g {
        family = family.with_second_derivative(Formula::func1(d2g, "p")?);
    }
    let env = clairaut_envelope(&family, [p0, p1], samples)?;
    let mut csv = String::from("p,x,y,degenerate\n");
    for q in &env.points {
        writeln!(csv, "{},{},{},{}", q.p, q.x, q.y, q.degenerate).expect("writing to a String");
    }
    let result = json!({
        "degenerate": env.degenerate,
        "points": env.points.iter().map(|q| json!({"p": q.p, "x": q.x, "y": q.y, "degenerate": q.degenerate})).collect::<Vec<_>>(),
    });
    Ok(Run::new(result)?.tol("samples", samples as f64).tol("degeneracy_threshold", DEGENERACY_THRESHOLD).csv("envelope.csv", csv))
}

fn riccati(args: &RiccatiArgs) -> Result<Run, CliError> {
    let v = Formula::func1(&args.v, "x")?;
    let particular = match &args.dv {
        Some(dv) => RiccatiParticular::new(v, Formula::func1(dv, "x")?),
        None => RiccatiParticular::numeric(v),
    };
    let lo = args.x.iter().fold(args.x0, |m, &x| m.min(x));
    let hi = args.x.iter().fold(args.x0, |m, &x| m.max(x));
    let lin = riccati_linearize(args.a, args.n, particular, [lo, hi])?;
    let mut points = Vec::new();
    let mut csv = String::from("x,z\n");
    for &x in &args.x {
        let z = lin.solve(args.x0, args.z0, x)?;
        writeln!(csv, "{x},{z}").expect("writing to a String");
        points.push(json!({"x": x, "z": z}));
    }
    let result = json!({"particular_residual": lin.residual, "points": points});
    Ok(Run::new(result)?.tol("residual_gate", RESIDUAL_GATE).tol("derivation_tol", DERIVATION_TOL).csv("riccati.csv", csv))
}
