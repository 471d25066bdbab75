//! Euler-Lagrange residuals, first-variation checks and the fundamental-lemma probe.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::functional::fd_step;
use super::{DiscreteObjective, DiscretePath, Functional1D, PathFunctional, SmoothPath, VariationalError};
use crate::numeric::Quadrature;

/// Max over `grid` and coordinates of
/// `|F_{x^i} - (F_{xdot^i, t} + sum_j F_{xdot^i, x^j} xdot^j + sum_j F_{xdot^i, xdot^j} xddot^j)|`.
/// The second partials are central differences of the first ones.
pub fn euler_system_residual(functional: &PathFunctional, path: &dyn SmoothPath, grid: &[f64]) -> Result<f64, VariationalError> {
    let d = functional.dim;
    if path.dim() != d {
        return Err(VariationalError::InvalidInput(format!("path has {} coordinates, functional {d}", path.dim())));
    }
    // nested differences need a larger outer step when the inner ones are numeric too
    let outer = |a: f64| if functional.partials.is_some() { fd_step(a) } else { f64::EPSILON.powf(2.0 / 9.0) * a.abs().max(1.0) };
    let (mut x, mut xd, mut xdd) = ([0.0; 3], [0.0; 3], [0.0; 3]);
    let (mut fx, mut fv) = ([0.0; 3], [0.0; 3]);
    let (mut gx, mut gp, mut gm) = ([0.0; 3], [0.0; 3], [0.0; 3]);
    let mut worst = 0.0f64;
    for &t in grid {
        path.jet(t, &mut x[..d], &mut xd[..d], &mut xdd[..d]);
        functional.partials(t, &x[..d], &xd[..d], &mut fx[..d], &mut fv[..d]);
        // total derivative of F_xdot along the path
        let mut total = [0.0; 3];
        let h = outer(t);
        functional.partials(t + h, &x[..d], &xd[..d], &mut gx[..d], &mut gp[..d]);
        functional.partials(t - h, &x[..d], &xd[..d], &mut gx[..d], &mut gm[..d]);
        for i in 0..d {
            total[i] += (gp[i] - gm[i]) / (2.0 * h);
        }
        for j in 0..d {
            let h = outer(x[j]);
            let mut xs = x;
            xs[j] = x[j] + h;
            functional.partials(t, &xs[..d], &xd[..d], &mut gx[..d], &mut gp[..d]);
            xs[j] = x[j] - h;
            functional.partials(t, &xs[..d], &xd[..d], &mut gx[..d], &mut gm[..d]);
            for i in 0..d {
                total[i] += (gp[i] - gm[i]) / (2.0 * h) * xd[j];
            }
            let h = outer(xd[j]);
            let mut vs = xd;
            vs[j] = xd[j] + h;
            functional.partials(t, &x[..d], &vs[..d], &mut gx[..d], &mut gp[..d]);
            vs[j] = xd[j] - h;
            functional.partials(t, &x[..d], &vs[..d], &mut gx[..d], &mut gm[..d]);
            for i in 0..d {
                total[i] += (gp[i] - gm[i]) / (2.0 * h) * xdd[j];
            }
        }
        for i in 0..d {
            let r = (fx[i] - total[i]).abs();
            if !r.is_finite() {
                return Err(VariationalError::InvalidInput(format!("residual is not finite at t = {t}")));
            }
            worst = worst.max(r);
        }
    }
    Ok(worst)
}

/// `f_y - d/dx f_{y'}` for a functional of one unknown.
pub fn el_residual(functional: &Functional1D, path: &dyn SmoothPath, grid: &[f64]) -> Result<f64, VariationalError> {
    euler_system_residual(&functional.to_path()?, path, grid)
}

/// `((J(Y + eps H) - J(Y)) / eps, grad J . H)` for a bump `H` given on the grid.
pub fn first_variation(objective: &DiscreteObjective, path: &DiscretePath, bump: &[f64], eps: f64) -> Result<(f64, f64), VariationalError> {
    objective.check_path(path)?;
    if bump.len() != path.ordinates.len() {
        return Err(VariationalError::InvalidInput("bump must have one value per ordinate".into()));
    }
    let d = path.dim;
    let last = path.n * d;
    for (i, &v) in bump[..d].iter().chain(&bump[last..]).enumerate() {
        if v != 0.0 {
            return Err(VariationalError::BumpNotPinned { coordinate: i % d, value: v });
        }
    }
    let moved: Vec<f64> = path.ordinates.iter().zip(bump).map(|(y, b)| y + eps * b).collect();
    let difference = (objective.value_ordinates(&moved) - objective.value(path)) / eps;
    let analytic: f64 = objective.gradient(path).iter().zip(bump).map(|(g, b)| g * b).sum();
    Ok((difference, analytic))
}

/// Sum of three random sine modes per coordinate, exactly zero at the ends.
pub fn random_bump(path: &DiscretePath, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let d = path.dim;
    let coeffs: Vec<[f64; 3]> =
        (0..d).map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
    let mut bump = vec![0.0; path.ordinates.len()];
    for k in 1..path.n {
        let s = (path.t(k) - path.t0) / (path.t1 - path.t0);
        for (i, c) in coeffs.iter().enumerate() {
            bump[k * d + i] = (1..=3).map(|m| c[m - 1] * (m as f64 * std::f64::consts::PI * s).sin()).sum();
        }
    }
    bump
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationCheck {
    /// Largest `|difference - analytic| / |analytic|` over the bumps.
    pub max_relative: f64,
    /// Largest `|grad J . H|`.
    pub max_first_variation: f64,
}

/// Compares difference quotients with the assembled first variation along
/// `bumps` seeded random directions.
pub fn variation_gradient_check(
    objective: &DiscreteObjective,
    path: &DiscretePath,
    h: f64,
    bumps: usize,
    seed: u64,
) -> Result<VariationCheck, VariationalError> {
    if !(h > 0.0) {
        return Err(VariationalError::InvalidInput(format!("step must be positive, got {h}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_relative = 0.0f64;
    let mut max_first_variation = 0.0f64;
    for _ in 0..bumps {
        let bump = random_bump(path, &mut rng);
        let (diff, analytic) = first_variation(objective, path, &bump, h)?;
        max_relative = max_relative.max((diff - analytic).abs() / analytic.abs().max(f64::MIN_POSITIVE));
        max_first_variation = max_first_variation.max(analytic.abs());
    }
    Ok(VariationCheck { max_relative, max_first_variation })
}

/// `(x - xi0)^4 (x - xi1)^4` on `[xi0, xi1]`, zero elsewhere.
pub fn quartic_bump(xi0: f64, xi1: f64, x: f64) -> f64 {
    if x < xi0 || x > xi1 {
        0.0
    } else {
        ((x - xi0) * (x - xi1)).powi(4)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    /// `max |int eta phi dx|` over the bump family.
    pub max_abs: f64,
    /// Same, with each integral divided by `int eta dx`.
    pub max_normalized: f64,
    /// Support of the bump attaining `max_abs`.
    pub worst_support: (f64, f64),
}

/// Tests `phi` against quartic bumps supported on `bumps` equal subintervals
/// of `[x0, x1]`.
pub fn fundamental_lemma_probe(phi: &dyn Fn(f64) -> f64, x0: f64, x1: f64, bumps: usize) -> Result<ProbeReport, VariationalError> {
    if bumps == 0 || !(x0 < x1) {
        return Err(VariationalError::InvalidInput(format!("need bumps >= 1 and x0 < x1 (bumps={bumps}, [{x0}, {x1}])")));
    }
    let mut report = ProbeReport { max_abs: 0.0, max_normalized: 0.0, worst_support: (x0, x0 + (x1 - x0) / bumps as f64) };
    for k in 0..bumps {
        let xi0 = x0 + (x1 - x0) * k as f64 / bumps as f64;
        let xi1 = if k + 1 == bumps { x1 } else { x0 + (x1 - x0) * (k + 1) as f64 / bumps as f64 };
        // int eta = w^9 B(5,5) = w^9 / 630
        let mass = (xi1 - xi0).powi(9) / 630.0;
        // absolute floor relative to the bump mass, so a phi at noise level
        // does not demand an unreachable relative accuracy
        let quad = Quadrature::with_tolerance(1e-13 * mass, 1e-12);
        let weighted = quad.integrate(|x| quartic_bump(xi0, xi1, x) * phi(x), xi0, xi1)?.value;
        if weighted.abs() > report.max_abs {
            report.max_abs = weighted.abs();
            report.worst_support = (xi0, xi1);
        }
        report.max_normalized = report.max_normalized.max(weighted.abs() / mass);
    }
    Ok(report)
}
