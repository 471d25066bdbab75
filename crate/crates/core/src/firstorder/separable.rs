//! Separation of variables for `dx / f(x) = g(y) dy`, i.e. `dy/dx = 1 / (f(x) g(y))`.
//!
//! The integrated relation is `H(x, y) = int_{x0}^{x} dt / f(t) - int_{y0}^{y} g(s) ds = 0`.

use std::fmt::Write as _;

use super::{FirstOrderError, Func1};
use crate::numeric::{QuadError, Quadrature};

const SCAN_POINTS: usize = 64;

#[derive(Clone)]
pub struct ImplicitSolution {
    pub f: Func1,
    pub g: Func1,
    pub seed: (f64, f64),
    pub level: f64,
    quad: Quadrature,
}

impl std::fmt::Debug for ImplicitSolution {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        out.debug_struct("ImplicitSolution").field("seed", &self.seed).field("level", &self.level).finish()
    }
}

/// Finds a sign change (or an exact zero / non-finite value) of `h` on `[a, b]`
/// and narrows it by bisection.
fn find_singularity(h: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Option<f64> {
    let bad = |v: f64| v == 0.0 || !v.is_finite();
    let mut prev = (a, h(a));
    if bad(prev.1) {
        return Some(a);
    }
    for i in 1..=SCAN_POINTS {
        let t = if i == SCAN_POINTS { b } else { a + (b - a) * i as f64 / SCAN_POINTS as f64 };
        let v = h(t);
        if bad(v) {
            return Some(t);
        }
        if v.signum() != prev.1.signum() {
            let (mut lo, mut hi) = (prev.0, t);
            let s_lo = prev.1.signum();
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo.min(hi) || mid >= lo.max(hi) {
                    break;
                }
                let vm = h(mid);
                if bad(vm) {
                    return Some(mid);
                }
                if vm.signum() == s_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        prev = (t, v);
    }
    None
}

impl ImplicitSolution {
    fn quad_x(&self, a: f64, b: f64) -> Result<f64, FirstOrderError> {
        let f = &self.f;
        if let Some(at) = find_singularity(&|t| f(t), a, b) {
            return Err(FirstOrderError::SingularIntegrand { variable: 'x', at });
        }
        self.quad.integrate(|t| 1.0 / f(t), a, b).map(|e| e.value).map_err(|e| map_quad('x', e))
    }

    fn quad_y(&self, a: f64, b: f64) -> Result<f64, FirstOrderError> {
        let g = &self.g;
        // a sign change of 1/g is either a pole of g or a harmless zero
        if let Some(at) = find_singularity(&|s| 1.0 / g(s), a, b) {
            let v = g(at);
            if !v.is_finite() || v.abs() > 1e6 * g(a).abs().max(g(b).abs()).max(1.0) {
                return Err(FirstOrderError::SingularIntegrand { variable: 'y', at });
            }
        }
        self.quad.integrate(|s| g(s), a, b).map(|e| e.value).map_err(|e| map_quad('y', e))
    }

    pub fn h(&self, x: f64, y: f64) -> Result<f64, FirstOrderError> {
        Ok(self.quad_x(self.seed.0, x)? - self.quad_y(self.seed.1, y)?)
    }

    /// Samples the level set `H = level` through the seed at `samples` abscissae
    /// from `x0` to `x_end`, solving for `y` by Newton's method.
    pub fn trace(&self, x_end: f64, samples: usize) -> Result<Vec<(f64, f64)>, FirstOrderError> {
        if samples < 2 || !x_end.is_finite() {
            return Err(FirstOrderError::InvalidInput("tracing needs a finite end point and at least 2 samples".into()));
        }
        let (x0, y0) = self.seed;
        let mut points = vec![(x0, y0)];
        let (mut x_prev, mut y_prev) = (x0, y0);
        for i in 1..samples {
            let x = x0 + (x_end - x0) * i as f64 / (samples - 1) as f64;
            // need int_{y_prev}^{y} g = int_{x_prev}^{x} 1/f
            let target = self.quad_x(x_prev, x)?;
            let gy = (self.g)(y_prev);
            let mut y = y_prev + target / gy;
            let mut converged = false;
            for _ in 0..50 {
                let miss = self.quad_y(y_prev, y)? - target;
                let step = miss / (self.g)(y);
                if !step.is_finite() {
                    break;
                }
                y -= step;
                if step.abs() <= 1e-14 * y.abs().max(1.0) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(FirstOrderError::TracingFailed { at: x });
            }
            points.push((x, y));
            (x_prev, y_prev) = (x, y);
        }
        Ok(points)
    }
}

fn map_quad(variable: char, e: QuadError) -> FirstOrderError {
    match e {
        QuadError::NonFinite { at } => FirstOrderError::SingularIntegrand { variable, at },
        other => FirstOrderError::Quadrature(other),
    }
}

pub fn solve_separable(f: Func1, g: Func1, x0: f64, y0: f64) -> Result<ImplicitSolution, FirstOrderError> {
    if !x0.is_finite() || !y0.is_finite() {
        return Err(FirstOrderError::InvalidInput("seed must be finite".into()));
    }
    let (fx, gy) = (f(x0), g(y0));
    if fx == 0.0 || !fx.is_finite() {
        return Err(FirstOrderError::SingularIntegrand { variable: 'x', at: x0 });
    }
    if !gy.is_finite() {
        return Err(FirstOrderError::SingularIntegrand { variable: 'y', at: y0 });
    }
    Ok(ImplicitSolution { f, g, seed: (x0, y0), level: 0.0, quad: Quadrature::with_tolerance(1e-12, 1e-13) })
}

/// `x` on the cycloid `(2 b^2 y - 2 a^3) / (3 b^2) sqrt(b^2 y - a^3) = x sqrt(a^3)`.
pub fn isochrone_closed_form(a: f64, b: f64, y: f64) -> Result<f64, FirstOrderError> {
    if !(a > 0.0 && a.is_finite()) || b == 0.0 || !b.is_finite() || !y.is_finite() {
        return Err(FirstOrderError::InvalidInput(format!("need a > 0 and b != 0 (a={a}, b={b})")));
    }
    let a3 = a.powi(3);
    let s = b * b * y - a3;
    if s < 0.0 {
        return Err(FirstOrderError::Domain(format!("b^2 y - a^3 = {s:e} < 0")));
    }
    Ok((2.0 * b * b * y - 2.0 * a3) / (3.0 * b * b) * s.sqrt() / a3.sqrt())
}

/// `x,y` CSV with a header row.
pub fn polyline_csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from("x,y\n");
    for (x, y) in points {
        writeln!(out, "{x},{y}").expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::numeric::integrate_ivp;

    #[test]
    fn unit_slope_line() {
        let s = solve_separable(Arc::new(|_| 1.0), Arc::new(|_| 1.0), 1.0, 2.0).unwrap();
        for &(x, y) in &[(3.0, 1.0), (-1.0, 0.5), (1.0, 2.0)] {
            assert!((s.h(x, y).unwrap() - ((x - 1.0) - (y - 2.0))).abs() < 1e-13);
        }
        let pts = s.trace(4.0, 7).unwrap();
        assert!(pts.iter().all(|(x, y)| (y - (x + 1.0)).abs() < 1e-12));
    }

    #[test]
    fn exponential_growth_level_sets() {
        // dy/dx = y: f = 1, g = 1/y -> H = x - ln y (seed (0, 1))
        let s = solve_separable(Arc::new(|_| 1.0), Arc::new(|y| 1.0 / y), 0.0, 1.0).unwrap();
        assert!((s.h(1.5, 2.0).unwrap() - (1.5 - 2f64.ln())).abs() < 1e-12);
        for (x, y) in s.trace(2.0, 9).unwrap() {
            assert!((y - x.exp()).abs() < 1e-10 * x.exp());
        }
        // the y-quadrature crosses y = 0 where g is singular
        assert!(matches!(s.h(0.0, -1.0), Err(FirstOrderError::SingularIntegrand { variable: 'y', .. })));
    }

    #[test]
    fn vanishing_f_reported_with_location() {
        let s = solve_separable(Arc::new(|x| x - 0.3), Arc::new(|_| 1.0), 1.0, 0.0).unwrap();
        match s.h(0.0, 0.0) {
            Err(FirstOrderError::SingularIntegrand { variable: 'x', at }) => assert!((at - 0.3).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn isochrone_values() {
        assert_eq!(isochrone_closed_form(1.0, 1.0, 1.0).unwrap(), 0.0);
        assert!((isochrone_closed_form(1.0, 1.0, 2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((isochrone_closed_form(2.0, 3.0, 8.0 / 9.0).unwrap()).abs() < 1e-14);
        assert!(matches!(isochrone_closed_form(1.0, 1.0, 0.5), Err(FirstOrderError::Domain(_))));
        // dx/dy = sqrt(b^2 y - a^3) / sqrt(a^3) = 1 at a = b = 1, y = 2
        let h = 1e-4;
        let d = (isochrone_closed_form(1.0, 1.0, 2.0 + h).unwrap() - isochrone_closed_form(1.0, 1.0, 2.0 - h).unwrap()) / (2.0 * h);
        assert!((d - 1.0).abs() < 1e-7);
    }

    #[test]
    fn isochrone_quadrature_matches_closed_form() {
        let (a, b) = (1.2f64, 0.9f64);
        let a3 = a.powi(3);
        let y0 = 2.5;
        let x0 = isochrone_closed_form(a, b, y0).unwrap();
        let s = solve_separable(Arc::new(|_| 1.0), Arc::new(move |y| (b * b * y - a3).sqrt() / a3.sqrt()), x0, y0).unwrap();
        for &y in &[2.6, 3.0, 4.5] {
            let x = isochrone_closed_form(a, b, y).unwrap();
            assert!(s.h(x, y).unwrap().abs() < 1e-10);
        }
        // dy/dx = sqrt(a^3) / sqrt(b^2 y - a^3) integrated numerically
        let y = integrate_ivp(|_, u, d| d[0] = a3.sqrt() / (b * b * u[0] - a3).sqrt(), x0, &[y0], x0 + 1.0, 1e-12).unwrap()[0];
        assert!((isochrone_closed_form(a, b, y).unwrap() - (x0 + 1.0)).abs() < 1e-8);
    }

    #[test]
    fn csv_export() {
        assert_eq!(polyline_csv(&[(0.0, 1.0), (0.5, -2.25)]), "x,y\n0,1\n0.5,-2.25\n");
    }
}
