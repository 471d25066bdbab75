//! Deterministic descent on the free ordinates: limited-memory BFGS or plain
//! gradient descent, both with Armijo backtracking.
//!
//! Every accepted step has `J_new <= J_old`. When the Armijo decrease is
//! below the rounding level of `J`, a step that does not raise `J` is judged
//! on the trapezoid estimate `alpha (g_old + g_new) . d / 2` instead. Below
//! that, `J` no longer resolves the remaining decrease; the search gives up and
//! the result is flagged as not converged.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{DiscreteObjective, DiscretePath, VariationalError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum StepRule {
    GradientDescent,
    Lbfgs { memory: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MinimizeOptions {
    pub max_iter: usize,
    /// Convergence when the max-norm of the gradient drops to this.
    pub grad_tol: f64,
    pub step_rule: StepRule,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self { max_iter: 20_000, grad_tol: 1e-9, step_rule: StepRule::Lbfgs { memory: 10 } }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeResult {
    pub path: DiscretePath,
    pub converged: bool,
    pub iterations: usize,
    pub objective: f64,
    pub grad_norm: f64,
    /// Objective after each accepted step, starting with the initial value.
    pub history: Vec<f64>,
}

const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;
/// Relative size of `J` changes treated as rounding noise.
const ROUNDING: f64 = 64.0 * f64::EPSILON;
/// Retries at a slightly shorter step when only rounding made `J` rise.
const MAX_NUDGES: usize = 16;
const NUDGE: f64 = 1.0 / 64.0;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn lbfgs_direction(g: &[f64], memory: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q: Vec<f64> = g.iter().map(|v| -v).collect();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y, rho) in memory.iter().rev() {
        let a = rho * dot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push(a);
    }
    if let Some((s, y, _)) = memory.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|qi| *qi *= gamma);
    }
    for ((s, y, rho), a) in memory.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    q
}

pub fn minimize(objective: &DiscreteObjective, init: &DiscretePath, opts: &MinimizeOptions) -> Result<MinimizeResult, VariationalError> {
    objective.check_path(init)?;
    if !(opts.grad_tol >= 0.0) {
        return Err(VariationalError::InvalidInput(format!("grad_tol must be non-negative, got {}", opts.grad_tol)));
    }
    let memory_len = match opts.step_rule {
        StepRule::GradientDescent => 0,
        StepRule::Lbfgs { memory } => memory,
    };

    let mut x = init.ordinates.clone();
    let mut f = objective.value_ordinates(&x);
    let mut g = vec![0.0; x.len()];
    objective.gradient_ordinates(&x, &mut g);
    if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Err(VariationalError::NonFinite { iteration: 0 });
    }
    let mut gnorm = max_norm(&g);
    let mut history = vec![f];
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut last_alpha = 1.0f64;
    let mut x_new = x.clone();
    let mut g_new = g.clone();
    let mut iterations = 0;

    while gnorm > opts.grad_tol && iterations < opts.max_iter {
        let mut d = if memory.is_empty() { g.iter().map(|v| -v).collect() } else { lbfgs_direction(&g, &memory) };
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            memory.clear();
            d = g.iter().map(|v| -v).collect();
            slope = dot(&g, &d);
        }
        let mut alpha = if memory.is_empty() {
            if memory_len == 0 { (2.0 * last_alpha).min(1e12) } else { 1.0 / dot(&g, &g).sqrt().max(1.0) }
        } else {
            1.0
        };

        let mut accepted = false;
        let mut nudges = 0;
        for _ in 0..MAX_BACKTRACKS + MAX_NUDGES {
            x_new.iter_mut().zip(x.iter().zip(&d)).for_each(|(xn, (xi, di))| *xn = xi + alpha * di);
            if x_new == x {
                break;
            }
            let f_trial = objective.value_ordinates(&x_new);
            let mut shrink = true;
            if f_trial <= f + ARMIJO_C1 * alpha * slope {
                objective.gradient_ordinates(&x_new, &mut g_new);
                accepted = true;
            } else if f_trial.is_finite() && f_trial - f <= ROUNDING * f.abs().max(f64::MIN_POSITIVE) {
                // the change is at the rounding level of J: judge the step on
                // the trapezoid estimate alpha (g + g_new) . d / 2, exact for
                // quadratics, and only ever take it when J does not rise
                objective.gradient_ordinates(&x_new, &mut g_new);
                let estimate = 0.5 * alpha * (slope + dot(&g_new, &d));
                if estimate <= ARMIJO_C1 * alpha * slope {
                    if f_trial <= f {
                        accepted = true;
                    } else if nudges < MAX_NUDGES {
                        nudges += 1;
                        shrink = false;
                    }
                }
            }
            if accepted {
                let f_new = f_trial;
                if g_new.iter().any(|v| !v.is_finite()) {
                    return Err(VariationalError::NonFinite { iteration: iterations + 1 });
                }
                if memory_len > 0 {
                    let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
                    let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
                    let sy = dot(&s, &y);
                    if sy > 0.0 {
                        if memory.len() == memory_len {
                            memory.pop_front();
                        }
                        memory.push_back((s, y, 1.0 / sy));
                    }
                }
                std::mem::swap(&mut x, &mut x_new);
                std::mem::swap(&mut g, &mut g_new);
                f = f_new;
                gnorm = max_norm(&g);
                history.push(f);
                last_alpha = alpha;
                break;
            }
            alpha *= if shrink { 0.5 } else { 1.0 - NUDGE };
        }
        if !accepted {
            break;
        }
        iterations += 1;
    }

    let mut path = init.clone();
    path.ordinates = x;
    Ok(MinimizeResult { path, converged: gnorm <= opts.grad_tol, iterations, objective: f, grad_norm: gnorm, history })
}
