//! Discrete and smooth paths.

use std::fmt::Write as _;
use std::sync::Arc;

use super::{PathFunctional, VariationalError};
use crate::numeric::CubicSpline;

/// Ordinates on `n + 1` uniform nodes of `[t0, t1]`, stored node by node.
/// The first and last node hold the boundary data and are never moved.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePath {
    pub t0: f64,
    pub t1: f64,
    pub n: usize,
    pub dim: usize,
    pub ordinates: Vec<f64>,
}

impl DiscretePath {
    pub fn from_fn(t0: f64, t1: f64, n: usize, dim: usize, f: impl Fn(f64) -> Vec<f64>) -> Result<Self, VariationalError> {
        if n < 2 {
            return Err(VariationalError::InvalidInput(format!("need N >= 2 intervals, got {n}")));
        }
        if !(t0 < t1) {
            return Err(VariationalError::InvalidInput(format!("need t0 < t1, got [{t0}, {t1}]")));
        }
        let mut ordinates = Vec::with_capacity((n + 1) * dim);
        for k in 0..=n {
            let p = f(node_t(t0, t1, n, k));
            if p.len() != dim {
                return Err(VariationalError::InvalidInput(format!("path value has {} components, expected {dim}", p.len())));
            }
            ordinates.extend(p);
        }
        Ok(Self { t0, t1, n, dim, ordinates })
    }

    /// Straight segment between the functional's endpoints.
    pub fn straight(functional: &PathFunctional, n: usize) -> Result<Self, VariationalError> {
        let (a, b, t0, t1) = (&functional.a, &functional.b, functional.t0, functional.t1);
        Self::from_fn(t0, t1, n, functional.dim, |t| {
            let s = (t - t0) / (t1 - t0);
            a.iter().zip(b).map(|(u, v)| u + s * (v - u)).collect()
        })
        .map(|mut p| {
            p.pin_endpoints(a, b);
            p
        })
    }

    pub(crate) fn pin_endpoints(&mut self, a: &[f64], b: &[f64]) {
        let d = self.dim;
        self.ordinates[..d].copy_from_slice(a);
        let last = self.n * d;
        self.ordinates[last..].copy_from_slice(b);
    }

    pub fn h(&self) -> f64 {
        (self.t1 - self.t0) / self.n as f64
    }

    pub fn t(&self, k: usize) -> f64 {
        node_t(self.t0, self.t1, self.n, k)
    }

    pub fn node(&self, k: usize) -> &[f64] {
        &self.ordinates[k * self.dim..(k + 1) * self.dim]
    }

    pub fn interior(&self) -> &[f64] {
        &self.ordinates[self.dim..self.n * self.dim]
    }

    pub fn interior_mut(&mut self) -> &mut [f64] {
        let (d, n) = (self.dim, self.n);
        &mut self.ordinates[d..n * d]
    }

    pub fn coordinate(&self, i: usize) -> Vec<f64> {
        (0..=self.n).map(|k| self.node(k)[i]).collect()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.n).map(|k| self.t(k)).collect()
    }

    /// `t,x0[,x1[,x2]]` CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for i in 0..self.dim {
            write!(out, ",x{i}").expect("writing to a String");
        }
        out.push('\n');
        for k in 0..=self.n {
            write!(out, "{}", self.t(k)).expect("writing to a String");
            for v in self.node(k) {
                write!(out, ",{v}").expect("writing to a String");
            }
            out.push('\n');
        }
        out
    }
}

fn node_t(t0: f64, t1: f64, n: usize, k: usize) -> f64 {
    if k == n {
        t1
    } else {
        t0 + (t1 - t0) * k as f64 / n as f64
    }
}

/// A path with position, velocity and acceleration at any `t`.
pub trait SmoothPath {
    fn dim(&self) -> usize;
    fn jet(&self, t: f64, x: &mut [f64], xd: &mut [f64], xdd: &mut [f64]);
}

/// Natural cubic interpolation of each coordinate of a discrete path.
#[derive(Debug, Clone)]
pub struct SplinePath {
    splines: Vec<CubicSpline>,
}

impl SplinePath {
    pub fn new(path: &DiscretePath) -> Self {
        let ts = path.times();
        let splines = (0..path.dim).map(|i| CubicSpline::natural(&ts, &path.coordinate(i)).expect("uniform grid with N >= 2")).collect();
        Self { splines }
    }
}

impl SmoothPath for SplinePath {
    fn dim(&self) -> usize {
        self.splines.len()
    }

    fn jet(&self, t: f64, x: &mut [f64], xd: &mut [f64], xdd: &mut [f64]) {
        for (i, s) in self.splines.iter().enumerate() {
            [x[i], xd[i], xdd[i]] = s.eval(t);
        }
    }
}

/// `jet(t) -> [x, xdot, xddot]` per coordinate, given in closed form.
pub type Jet = Arc<dyn Fn(f64) -> Vec<[f64; 3]> + Send + Sync>;

#[derive(Clone)]
pub struct FnPath {
    pub dim: usize,
    pub jet: Jet,
}

impl FnPath {
    pub fn new(dim: usize, jet: Jet) -> Self {
        Self { dim, jet }
    }
}

impl SmoothPath for FnPath {
    fn dim(&self) -> usize {
        self.dim
    }

    fn jet(&self, t: f64, x: &mut [f64], xd: &mut [f64], xdd: &mut [f64]) {
        for (i, [a, b, c]) in (self.jet)(t).into_iter().enumerate() {
            (x[i], xd[i], xdd[i]) = (a, b, c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_csv() {
        let p = DiscretePath::from_fn(0.0, 1.0, 2, 2, |t| vec![t, 2.0 * t]).unwrap();
        assert_eq!(p.ordinates, vec![0.0, 0.0, 0.5, 1.0, 1.0, 2.0]);
        assert_eq!(p.interior(), &[0.5, 1.0]);
        assert_eq!(p.to_csv(), "t,x0,x1\n0,0,0\n0.5,0.5,1\n1,1,2\n");
        assert!(DiscretePath::from_fn(0.0, 1.0, 1, 1, |t| vec![t]).is_err());
    }

    #[test]
    fn spline_reproduces_quadratics_in_the_middle() {
        let p = DiscretePath::from_fn(0.0, 1.0, 40, 1, |t| vec![t * t]).unwrap();
        let s = SplinePath::new(&p);
        let (mut x, mut xd, mut xdd) = ([0.0], [0.0], [0.0]);
        s.jet(0.5, &mut x, &mut xd, &mut xdd);
        assert!((x[0] - 0.25).abs() < 1e-12);
        assert!((xd[0] - 1.0).abs() < 1e-8);
        // natural end conditions pull y'' to 0 at the ends; it recovers inside
        assert!((xdd[0] - 2.0).abs() < 1e-6);
    }
}
