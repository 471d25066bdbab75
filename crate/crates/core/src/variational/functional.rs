//! Integrands `F(t, x, xdot)` over paths in `d <= 3` coordinates.

use std::sync::Arc;

use super::VariationalError;

pub type Integrand = Arc<dyn Fn(f64, &[f64], &[f64]) -> f64 + Send + Sync>;
/// Fills `dF/dx` and `dF/dxdot`.
pub type IntegrandPartials = Arc<dyn Fn(f64, &[f64], &[f64], &mut [f64], &mut [f64]) + Send + Sync>;
/// Scalar function of `(x, y, y')`.
pub type Scalar3 = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Central-difference step for an argument of size `a`.
pub(crate) fn fd_step(a: f64) -> f64 {
    f64::EPSILON.cbrt() * a.abs().max(1.0)
}

#[derive(Clone)]
pub struct PathFunctional {
    pub f: Integrand,
    /// Central differences with per-argument steps when absent.
    pub partials: Option<IntegrandPartials>,
    pub dim: usize,
    pub t0: f64,
    pub t1: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl std::fmt::Debug for PathFunctional {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PathFunctional")
            .field("dim", &self.dim)
            .field("t", &(self.t0, self.t1))
            .field("a", &self.a)
            .field("b", &self.b)
            .field("analytic_partials", &self.partials.is_some())
            .finish()
    }
}

impl PathFunctional {
    pub fn new(f: Integrand, t0: f64, t1: f64, a: Vec<f64>, b: Vec<f64>) -> Result<Self, VariationalError> {
        let dim = a.len();
        if !(1..=3).contains(&dim) || b.len() != dim {
            return Err(VariationalError::InvalidInput(format!(
                "endpoints must share a dimension between 1 and 3 (got {} and {})",
                a.len(),
                b.len()
            )));
        }
        if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
            return Err(VariationalError::InvalidInput(format!("need t0 < t1, got [{t0}, {t1}]")));
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(VariationalError::InvalidInput("endpoint values must be finite".into()));
        }
        Ok(Self { f, partials: None, dim, t0, t1, a, b })
    }

    pub fn with_partials(mut self, partials: IntegrandPartials) -> Self {
        self.partials = Some(partials);
        self
    }

    /// `c F` with the same endpoints.
    pub fn scaled(&self, c: f64) -> Self {
        let f = self.f.clone();
        let partials = self.partials.clone().map(|p| -> IntegrandPartials {
            Arc::new(move |t, x, v, fx, fv| {
                p(t, x, v, fx, fv);
                fx.iter_mut().chain(fv.iter_mut()).for_each(|g| *g *= c);
            })
        });
        Self { f: Arc::new(move |t, x, v| c * f(t, x, v)), partials, ..self.clone() }
    }

    pub fn value(&self, t: f64, x: &[f64], v: &[f64]) -> f64 {
        (self.f)(t, x, v)
    }

    pub fn partials(&self, t: f64, x: &[f64], v: &[f64], fx: &mut [f64], fv: &mut [f64]) {
        if let Some(p) = &self.partials {
            p(t, x, v, fx, fv);
            return;
        }
        let mut xs = [0.0; 3];
        let mut vs = [0.0; 3];
        let d = self.dim;
        xs[..d].copy_from_slice(x);
        vs[..d].copy_from_slice(v);
        for i in 0..d {
            let h = fd_step(x[i]);
            xs[i] = x[i] + h;
            let up = (self.f)(t, &xs[..d], v);
            xs[i] = x[i] - h;
            let down = (self.f)(t, &xs[..d], v);
            xs[i] = x[i];
            fx[i] = (up - down) / (2.0 * h);

            let h = fd_step(v[i]);
            vs[i] = v[i] + h;
            let up = (self.f)(t, x, &vs[..d]);
            vs[i] = v[i] - h;
            let down = (self.f)(t, x, &vs[..d]);
            vs[i] = v[i];
            fv[i] = (up - down) / (2.0 * h);
        }
    }
}

/// `J = int_{x1}^{x2} f(x, y, y') dx` with `y(x1) = y1`, `y(x2) = y2`.
#[derive(Clone)]
pub struct Functional1D {
    pub f: Scalar3,
    pub df_dy: Option<Scalar3>,
    pub df_dyp: Option<Scalar3>,
    pub x1: f64,
    pub x2: f64,
    pub y1: f64,
    pub y2: f64,
}

impl Functional1D {
    pub fn new(f: Scalar3, x1: f64, x2: f64, y1: f64, y2: f64) -> Self {
        Self { f, df_dy: None, df_dyp: None, x1, x2, y1, y2 }
    }

    pub fn with_partials(mut self, df_dy: Scalar3, df_dyp: Scalar3) -> Self {
        self.df_dy = Some(df_dy);
        self.df_dyp = Some(df_dyp);
        self
    }

    pub fn to_path(&self) -> Result<PathFunctional, VariationalError> {
        let f = self.f.clone();
        let path = PathFunctional::new(Arc::new(move |t, x, v| f(t, x[0], v[0])), self.x1, self.x2, vec![self.y1], vec![self.y2])?;
        Ok(match (&self.df_dy, &self.df_dyp) {
            (Some(fy), Some(fp)) => {
                let (fy, fp) = (fy.clone(), fp.clone());
                path.with_partials(Arc::new(move |t, x, v, gx, gv| {
                    gx[0] = fy(t, x[0], v[0]);
                    gv[0] = fp(t, x[0], v[0]);
                }))
            }
            _ => path,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_partials_match_analytic() {
        let f: Integrand = Arc::new(|t, x, v| t * x[0] * x[0] + (x[1] * v[0]).sin() + v[1].powi(3));
        let p = PathFunctional::new(f, 0.0, 1.0, vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let (t, x, v) = (0.3, [0.7, -1.2], [0.4, 2.0]);
        let (mut fx, mut fv) = ([0.0; 2], [0.0; 2]);
        p.partials(t, &x, &v, &mut fx, &mut fv);
        let want_x = [2.0 * t * x[0], v[0] * (x[1] * v[0]).cos()];
        let want_v = [x[1] * (x[1] * v[0]).cos(), 3.0 * v[1] * v[1]];
        for i in 0..2 {
            assert!((fx[i] - want_x[i]).abs() < 1e-9);
            assert!((fv[i] - want_v[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn scaling_scales_partials() {
        let one = Functional1D::new(Arc::new(|_, y, yp| yp * yp / 2.0 - y), 0.0, 1.0, 0.0, 0.0)
            .with_partials(Arc::new(|_, _, _| -1.0), Arc::new(|_, _, yp| yp))
            .to_path()
            .unwrap();
        let three = one.scaled(3.0);
        let (mut fx, mut fv) = ([0.0], [0.0]);
        three.partials(0.0, &[1.0], &[2.0], &mut fx, &mut fv);
        assert_eq!((fx[0], fv[0]), (-3.0, 6.0));
        assert_eq!(three.value(0.0, &[1.0], &[2.0]), 3.0);
    }

    #[test]
    fn rejects_bad_shapes() {
        let f: Integrand = Arc::new(|_, _, _| 0.0);
        assert!(PathFunctional::new(f.clone(), 0.0, 1.0, vec![0.0; 4], vec![0.0; 4]).is_err());
        assert!(PathFunctional::new(f.clone(), 0.0, 1.0, vec![0.0], vec![0.0; 2]).is_err());
        assert!(PathFunctional::new(f, 1.0, 1.0, vec![0.0], vec![0.0]).is_err());
    }
}
