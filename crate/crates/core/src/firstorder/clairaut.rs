//! Singular solutions of Clairaut families `y = x p + g(p)`, `p = y'`.
//!
//! Eliminating `p` between `f = y - x p - g(p) = 0` and `df/dp = -x - g'(p) = 0`
//! gives the envelope `x = -g'(p)`, `y = x p + g(p)`.

use super::{FirstOrderError, Func1};
use crate::numeric::diff::{central, central_step};

/// `|g''(p)|` below this marks the point degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

#[derive(Clone)]
pub struct ClairautFamily {
    pub g: Func1,
    pub dg: Func1,
    /// Estimated by central differences of `dg` when absent.
    pub d2g: Option<Func1>,
}

impl ClairautFamily {
    pub fn new(g: Func1, dg: Func1) -> Self {
        Self { g, dg, d2g: None }
    }

    pub fn with_second_derivative(mut self, d2g: Func1) -> Self {
        self.d2g = Some(d2g);
        self
    }

    pub fn second_derivative(&self, p: f64) -> f64 {
        match &self.d2g {
            Some(d2g) => d2g(p),
            None => central(|q| (self.dg)(q), p, central_step(p)),
        }
    }

    /// `(y - x p - g(p), -x - g'(p))` at `(x, y)` with slope `p`.
    pub fn defining_residuals(&self, p: f64, x: f64, y: f64) -> (f64, f64) {
        (y - x * p - (self.g)(p), -x - (self.dg)(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopePoint {
    pub p: f64,
    pub x: f64,
    pub y: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub points: Vec<EnvelopePoint>,
    /// Every sample has `|g''| < DEGENERACY_THRESHOLD`: the lines of the general
    /// solution are parallel or concurrent and there is no curve.
    pub degenerate: bool,
}

impl Envelope {
    pub fn xy(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| (p.x, p.y)).collect()
    }
}

pub fn clairaut_envelope(family: &ClairautFamily, p_interval: [f64; 2], samples: usize) -> Result<Envelope, FirstOrderError> {
    let [p0, p1] = p_interval;
    if samples < 2 {
        return Err(FirstOrderError::InvalidInput(format!("need at least 2 samples, got {samples}")));
    }
    if !p0.is_finite() || !p1.is_finite() {
        return Err(FirstOrderError::InvalidInput("slope interval must be finite".into()));
    }
    let mut points = Vec::with_capacity(samples);
    for i in 0..samples {
        let p = if i + 1 == samples { p1 } else { p0 + (p1 - p0) * i as f64 / (samples - 1) as f64 };
        let x = -(family.dg)(p);
        let y = x * p + (family.g)(p);
        if !x.is_finite() || !y.is_finite() {
            return Err(FirstOrderError::Domain(format!("family does not evaluate at p = {p}")));
        }
        let degenerate = family.second_derivative(p).abs() < DEGENERACY_THRESHOLD;
        points.push(EnvelopePoint { p, x, y, degenerate });
    }
    let degenerate = points.iter().all(|p| p.degenerate);
    Ok(Envelope { points, degenerate })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    #[test]
    fn parabola_envelope() {
        // g = -p^2: x = 2p, y = p^2 = x^2/4
        let fam = ClairautFamily::new(Arc::new(|p| -p * p), Arc::new(|p| -2.0 * p));
        let env = clairaut_envelope(&fam, [-2.0, 2.0], 41).unwrap();
        assert!(!env.degenerate);
        for pt in &env.points {
            assert!((pt.y - pt.x * pt.x / 4.0).abs() < 1e-14);
            let (r1, r2) = fam.defining_residuals(pt.p, pt.x, pt.y);
            assert!(r1.abs() <= 1e-10 && r2.abs() <= 1e-10);
            // the line y = c x - c^2 with c = p touches y = x^2/4 at x = 2c with slope c
            let c = pt.p;
            assert!((c * pt.x - c * c - pt.y).abs() < 1e-14);
            assert!((pt.x / 2.0 - c).abs() < 1e-14);
        }
    }

    #[test]
    fn linear_g_is_degenerate() {
        let fam = ClairautFamily::new(Arc::new(|p| p), Arc::new(|_| 1.0));
        let env = clairaut_envelope(&fam, [-1.0, 1.0], 5).unwrap();
        assert!(env.degenerate);
        assert!(env.points.iter().all(|p| p.x == -1.0));
    }

    #[test]
    fn exponential_family() {
        // g = -e^p: x = e^p, y = p e^p - e^p = x ln x - x
        let fam = ClairautFamily::new(Arc::new(|p: f64| -p.exp()), Arc::new(|p: f64| -p.exp()));
        let env = clairaut_envelope(&fam, [-1.0, 1.5], 5).unwrap();
        for pt in &env.points {
            assert!((pt.y - (pt.x * pt.x.ln() - pt.x)).abs() < 1e-13);
        }
        assert!(clairaut_envelope(&fam, [0.0, 1.0], 1).is_err());
    }
}
