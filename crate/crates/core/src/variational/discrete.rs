//! Euler's direct method: the integral becomes a sum over the ordinates.
//!
//! On interval `k` the integrand is sampled at the midpoint
//! `t_{k+1/2}`, `(Y_k + Y_{k+1}) / 2`, with the forward quotient
//! `(Y_{k+1} - Y_k) / h` as velocity, so
//! `J_N(Y) = sum_k F(t_{k+1/2}, (Y_k + Y_{k+1})/2, (Y_{k+1} - Y_k)/h) h`.

use super::{DiscretePath, PathFunctional, VariationalError};

#[derive(Debug, Clone)]
pub struct DiscreteObjective {
    pub functional: PathFunctional,
    pub n: usize,
}

pub fn discretize(functional: &PathFunctional, n: usize) -> Result<DiscreteObjective, VariationalError> {
    if n < 2 {
        return Err(VariationalError::InvalidInput(format!("need N >= 2 intervals, got {n}")));
    }
    Ok(DiscreteObjective { functional: functional.clone(), n })
}

impl DiscreteObjective {
    pub fn dim(&self) -> usize {
        self.functional.dim
    }

    pub fn h(&self) -> f64 {
        (self.functional.t1 - self.functional.t0) / self.n as f64
    }

    /// Number of free ordinates.
    pub fn unknowns(&self) -> usize {
        (self.n - 1) * self.dim()
    }

    pub fn initial_straight(&self) -> Result<DiscretePath, VariationalError> {
        DiscretePath::straight(&self.functional, self.n)
    }

    /// Checks that `path` lives on this grid and carries the boundary data.
    pub fn check_path(&self, path: &DiscretePath) -> Result<(), VariationalError> {
        let f = &self.functional;
        if path.n != self.n || path.dim != f.dim || path.t0 != f.t0 || path.t1 != f.t1 {
            return Err(VariationalError::InvalidInput("path grid does not match the objective".into()));
        }
        if path.node(0) != f.a.as_slice() || path.node(self.n) != f.b.as_slice() {
            return Err(VariationalError::InvalidInput("path endpoints differ from the boundary data".into()));
        }
        Ok(())
    }

    fn midpoint(&self, ords: &[f64], k: usize, x: &mut [f64], v: &mut [f64]) -> f64 {
        let d = self.dim();
        let h = self.h();
        for i in 0..d {
            let (l, r) = (ords[k * d + i], ords[(k + 1) * d + i]);
            x[i] = 0.5 * (l + r);
            v[i] = (r - l) / h;
        }
        self.functional.t0 + (k as f64 + 0.5) * h
    }

    /// `J_N` on a full ordinate vector (endpoints included), summed with
    /// Neumaier compensation.
    pub fn value_ordinates(&self, ords: &[f64]) -> f64 {
        let (mut x, mut v) = ([0.0; 3], [0.0; 3]);
        let d = self.dim();
        let h = self.h();
        let (mut total, mut carry) = (0.0f64, 0.0f64);
        for k in 0..self.n {
            let t = self.midpoint(ords, k, &mut x, &mut v);
            let term = self.functional.value(t, &x[..d], &v[..d]) * h;
            let next = total + term;
            carry += if total.abs() >= term.abs() { (total - next) + term } else { (term - next) + total };
            total = next;
        }
        total + carry
    }

    pub fn value(&self, path: &DiscretePath) -> f64 {
        self.value_ordinates(&path.ordinates)
    }

    /// Gradient of `J_N` with respect to every ordinate; the endpoint entries
    /// are left at zero. Interval contributions are added in a fixed order.
    pub fn gradient_ordinates(&self, ords: &[f64], grad: &mut [f64]) {
        let (mut x, mut v, mut fx, mut fv) = ([0.0; 3], [0.0; 3], [0.0; 3], [0.0; 3]);
        let d = self.dim();
        let h = self.h();
        grad.iter_mut().for_each(|g| *g = 0.0);
        for k in 0..self.n {
            let t = self.midpoint(ords, k, &mut x, &mut v);
            self.functional.partials(t, &x[..d], &v[..d], &mut fx[..d], &mut fv[..d]);
            for i in 0..d {
                // d/dY_k and d/dY_{k+1} of h F(mid, (Y_k+Y_{k+1})/2, (Y_{k+1}-Y_k)/h)
                let (sx, sv) = (0.5 * h * fx[i], fv[i]);
                grad[k * d + i] += sx - sv;
                grad[(k + 1) * d + i] += sx + sv;
            }
        }
        let last = self.n * d;
        grad[..d].fill(0.0);
        grad[last..].fill(0.0);
    }

    pub fn gradient(&self, path: &DiscretePath) -> Vec<f64> {
        let mut g = vec![0.0; path.ordinates.len()];
        self.gradient_ordinates(&path.ordinates, &mut g);
        g
    }
}
