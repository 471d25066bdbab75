//! Dormand–Prince 5(4) integrator with embedded error control.
//!
//! Used as an independent oracle for the closed-form solvers, never as the
//! solver under test.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IvpError {
    #[error("step size underflow at x = {at} (h = {step:e})")]
    StepUnderflow { at: f64, step: f64 },
    #[error("step budget of {max_steps} exhausted at x = {at}")]
    TooManySteps { at: f64, max_steps: usize },
    #[error("integration stopped by observer at x = {at}")]
    Stopped { at: f64 },
    #[error("invalid integration request: {0}")]
    Invalid(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvpOptions {
    /// Mixed absolute/relative local error tolerance.
    pub tol: f64,
    pub max_steps: usize,
    pub initial_step: Option<f64>,
    /// Upper bound on |h|; `None` means the whole interval.
    pub max_step: Option<f64>,
}

impl IvpOptions {
    pub fn new(tol: f64) -> Self {
        Self { tol, max_steps: 1_000_000, initial_step: None, max_step: None }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th and embedded 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates `y' = rhs(x, y)` from `x0` to `x1` and returns `y(x1)`.
pub fn integrate_ivp<F>(rhs: F, x0: f64, y0: &[f64], x1: f64, tol: f64) -> Result<Vec<f64>, IvpError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    integrate_ivp_observed(rhs, x0, y0, x1, IvpOptions::new(tol), |_, _| true)
}

/// Like [`integrate_ivp`], calling `observer(x, y)` after every accepted step.
/// Returning `false` from the observer aborts with [`IvpError::Stopped`].
pub fn integrate_ivp_observed<F, O>(
    mut rhs: F,
    x0: f64,
    y0: &[f64],
    x1: f64,
    opts: IvpOptions,
    mut observer: O,
) -> Result<Vec<f64>, IvpError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    O: FnMut(f64, &[f64]) -> bool,
{
    if !(opts.tol > 0.0) {
        return Err(IvpError::Invalid("tolerance must be positive"));
    }
    if !x0.is_finite() || !x1.is_finite() || y0.iter().any(|v| !v.is_finite()) {
        return Err(IvpError::Invalid("non-finite initial data"));
    }
    let n = y0.len();
    let mut y = y0.to_vec();
    if x0 == x1 {
        return Ok(y);
    }
    let dir = (x1 - x0).signum();
    let span = (x1 - x0).abs();
    let max_step = opts.max_step.unwrap_or(span).min(span);

    let mut k = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    rhs(x0, &y, &mut k[0]);

    let mut h = opts.initial_step.map(f64::abs).unwrap_or_else(|| {
        let yn = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let fn_ = k[0].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let guess = if fn_ > 0.0 { 0.01 * (yn.max(opts.tol) / fn_) } else { 1e-3 * span };
        guess.clamp(1e-10 * span.max(1.0), 0.1 * span)
    });
    h = h.min(max_step);

    let mut x = x0;
    let mut steps = 0usize;
    while (x1 - x) * dir > 0.0 {
        if steps >= opts.max_steps {
            return Err(IvpError::TooManySteps { at: x, max_steps: opts.max_steps });
        }
        steps += 1;
        let last = h >= (x1 - x).abs();
        let hs = if last { x1 - x } else { dir * h };

        stage(&mut tmp, &y, hs, &[(A21, &k[0])]);
        rhs(x + C2 * hs, &tmp, &mut k[1]);
        stage(&mut tmp, &y, hs, &[(A31, &k[0]), (A32, &k[1])]);
        rhs(x + C3 * hs, &tmp, &mut k[2]);
        stage(&mut tmp, &y, hs, &[(A41, &k[0]), (A42, &k[1]), (A43, &k[2])]);
        rhs(x + C4 * hs, &tmp, &mut k[3]);
        stage(&mut tmp, &y, hs, &[(A51, &k[0]), (A52, &k[1]), (A53, &k[2]), (A54, &k[3])]);
        rhs(x + C5 * hs, &tmp, &mut k[4]);
        stage(&mut tmp, &y, hs, &[(A61, &k[0]), (A62, &k[1]), (A63, &k[2]), (A64, &k[3]), (A65, &k[4])]);
        rhs(x + hs, &tmp, &mut k[5]);
        stage(&mut y_new, &y, hs, &[(B1, &k[0]), (B3, &k[2]), (B4, &k[3]), (B5, &k[4]), (B6, &k[5])]);
        let x_new = if last { x1 } else { x + hs };
        rhs(x_new, &y_new, &mut k[6]);

        let mut err2 = 0.0;
        for i in 0..n {
            let e = hs * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
            let sc = opts.tol * (1.0 + y[i].abs().max(y_new[i].abs()));
            err2 += (e / sc).powi(2);
        }
        let err = (err2 / n.max(1) as f64).sqrt();
        let finite = err.is_finite() && y_new.iter().all(|v| v.is_finite());

        if finite && err <= 1.0 {
            x = x_new;
            std::mem::swap(&mut y, &mut y_new);
            k.swap(0, 6);
            if !observer(x, &y) {
                return Err(IvpError::Stopped { at: x });
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * fac).min(max_step);
        } else {
            let fac = if finite { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.25 };
            h *= fac;
            if h < 16.0 * f64::EPSILON * x.abs().max(span) {
                return Err(IvpError::StepUnderflow { at: x, step: h });
            }
        }
    }
    Ok(y)
}

fn stage(out: &mut [f64], y: &[f64], h: f64, terms: &[(f64, &Vec<f64>)]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (a, k) in terms {
            acc += a * k[i];
        }
        *o = y[i] + h * acc;
    }
}
