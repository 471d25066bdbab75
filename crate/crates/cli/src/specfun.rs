use std::fmt::Write as _;

use clap::{Args, Subcommand};
use eulerkit::specfun::{
    beta_gamma, beta_integral, beta_recurrence, bessel_i_series, chain_normalization, chain_ode_residual,
    chain_solution_integral, chain_solution_series, gamma, ChainProblem,
};
use serde::Serialize;
use serde_json::json;

use crate::output::{CliError, Run};
use crate::Global;

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Specfun {
    Gamma(GammaArgs),
    /// B(p, q) by quadrature, with the Gamma form and the recurrence.
    Beta(BetaArgs),
    /// Modified Bessel function I_v(z) by its power series.
    BesselI(BesselArgs),
    /// Hanging-chain oscillation mode, as a series and as an integral.
    Chain(ChainArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GammaArgs {
    #[arg(allow_hyphen_values = true)]
    pub x: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BetaArgs {
    pub p: f64,
    pub q: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BesselArgs {
    #[arg(allow_hyphen_values = true)]
    pub v: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChainArgs {
    /// Weight exponent, n > -1.
    #[arg(long, allow_hyphen_values = true)]
    pub n: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long = "A", default_value_t = 1.0, allow_hyphen_values = true)]
    pub a: f64,
    /// Evaluation points; `q = -(n+1) x / alpha` must be non-negative.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
}

const DEFAULT_BESSEL_TOL: f64 = 1e-14;
const RESIDUAL_STEP: f64 = 1e-3;

pub fn run(cmd: &Specfun, global: &Global) -> Result<Run, CliError> {
    match cmd {
        Specfun::Gamma(a) => Ok(Run::new(json!({"value": gamma(a.x)?}))?),
        Specfun::Beta(a) => {
            let quad = beta_integral(a.p, a.q)?;
            let rec = beta_recurrence(a.p, a.q)?;
            let result = json!({"value": quad.value, "est_error": quad.est_error, "gamma_form": beta_gamma(a.p, a.q)?,
                "recurrence": rec.value});
            Ok(Run::new(result)?)
        }
        Specfun::BesselI(a) => {
            let tol = global.tol.unwrap_or(DEFAULT_BESSEL_TOL);
            Ok(Run::new(bessel_i_series(a.v, a.z, tol)?)?.tol("tol", tol))
        }
        Specfun::Chain(a) => chain(a),
    }
}

fn chain(args: &ChainArgs) -> Result<Run, CliError> {
    let prob = ChainProblem::new(args.n, args.alpha, args.a)?;
    let ratio = chain_normalization(args.n)?;
    let mut points = Vec::new();
    let mut csv = String::from("x,q,series,integral\n");
    for &x in &args.x {
        let s = ratio * chain_solution_series(&prob, x)?.value;
        let i = chain_solution_integral(&prob, x)?.value;
        writeln!(csv, "{x},{},{s},{i}", prob.q(x)).expect("writing to a String");
        points.push(json!({"x": x, "q": prob.q(x), "series": s, "integral": i, "difference": (s - i).abs()}));
    }
    let series = |x: f64| chain_solution_series(&prob, x).map_or(f64::NAN, |e| ratio * e.value);
    let integral = |x: f64| chain_solution_integral(&prob, x).map_or(f64::NAN, |e| e.value);
    // the five-point stencil must stay on the side where q >= 0
    let grid: Vec<f64> = args.x.iter().copied().filter(|&x| x.abs() > 2.0 * RESIDUAL_STEP && prob.q(x) > 0.0).collect();
    let result = json!({
        "normalization": ratio,
        "points": points,
        "ode_residual": if grid.is_empty() { json!(null) } else {
            json!({"series": chain_ode_residual(&prob, &series, &grid, RESIDUAL_STEP),
                   "integral": chain_ode_residual(&prob, &integral, &grid, RESIDUAL_STEP)})
        },
    });
    Ok(Run::new(result)?.tol("residual_step", RESIDUAL_STEP).csv("chain.csv", csv))
}
