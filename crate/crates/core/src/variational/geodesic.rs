//! Arc length on a surface `z = z(x, y)` as a functional of the projected
//! path `(x(t), y(t))`, with `p = z_x`, `q = z_y`, `r = z_xx`, `s = z_xy`,
//! `t = z_yy`.

use std::sync::Arc;

use super::{DiscretePath, PathFunctional, VariationalError};
use crate::firstorder::Func2;

#[derive(Clone)]
pub struct SurfaceJet {
    pub z: Func2,
    pub p: Func2,
    pub q: Func2,
    pub r: Func2,
    pub s: Func2,
    pub t: Func2,
}

impl std::fmt::Debug for SurfaceJet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("SurfaceJet")
    }
}

fn constant(c: f64) -> Func2 {
    Arc::new(move |_, _| c)
}

const FIRST_STEP: f64 = 1e-5;
const SECOND_STEP: f64 = 1e-4;

impl SurfaceJet {
    /// `z = a x + b y + c`.
    pub fn plane(a: f64, b: f64, c: f64) -> Self {
        Self {
            z: Arc::new(move |x, y| a * x + b * y + c),
            p: constant(a),
            q: constant(b),
            r: constant(0.0),
            s: constant(0.0),
            t: constant(0.0),
        }
    }

    /// Upper hemisphere `z = sqrt(R^2 - x^2 - y^2)`.
    pub fn hemisphere(radius: f64) -> Self {
        let r2 = radius * radius;
        let z = move |x: f64, y: f64| (r2 - x * x - y * y).sqrt();
        Self {
            z: Arc::new(z),
            p: Arc::new(move |x, y| -x / z(x, y)),
            q: Arc::new(move |x, y| -y / z(x, y)),
            r: Arc::new(move |x, y| -(r2 - y * y) / z(x, y).powi(3)),
            s: Arc::new(move |x, y| -x * y / z(x, y).powi(3)),
            t: Arc::new(move |x, y| -(r2 - x * x) / z(x, y).powi(3)),
        }
    }

    /// All derivatives by central differences of `z`.
    pub fn numeric(z: Func2) -> Self {
        let (zp, zq, zr, zs, zt) = (z.clone(), z.clone(), z.clone(), z.clone(), z.clone());
        let (h, k) = (FIRST_STEP, SECOND_STEP);
        Self {
            p: Arc::new(move |x, y| (zp(x + h, y) - zp(x - h, y)) / (2.0 * h)),
            q: Arc::new(move |x, y| (zq(x, y + h) - zq(x, y - h)) / (2.0 * h)),
            r: Arc::new(move |x, y| (zr(x + k, y) - 2.0 * zr(x, y) + zr(x - k, y)) / (k * k)),
            s: Arc::new(move |x, y| (zs(x + k, y + k) - zs(x + k, y - k) - zs(x - k, y + k) + zs(x - k, y - k)) / (4.0 * k * k)),
            t: Arc::new(move |x, y| (zt(x, y + k) - 2.0 * zt(x, y) + zt(x, y - k)) / (k * k)),
            z,
        }
    }

    /// `|d/dy p - d/dx q|` at `(x, y)` with differences of this jet's `p` and `q`.
    pub fn mixed_partial_asymmetry(&self, x: f64, y: f64) -> f64 {
        let k = SECOND_STEP;
        let py = ((self.p)(x, y + k) - (self.p)(x, y - k)) / (2.0 * k);
        let qx = ((self.q)(x + k, y) - (self.q)(x - k, y)) / (2.0 * k);
        (py - qx).abs()
    }
}

/// `F = sqrt(xdot^2 + ydot^2 + (p xdot + q ydot)^2)` on `t in [0, 1]` from `a` to `b`.
pub fn geodesic_functional(surface: &SurfaceJet, a: [f64; 2], b: [f64; 2]) -> Result<PathFunctional, VariationalError> {
    let (p, q) = (surface.p.clone(), surface.q.clone());
    let f = Arc::new(move |_: f64, x: &[f64], v: &[f64]| {
        let w = p(x[0], x[1]) * v[0] + q(x[0], x[1]) * v[1];
        (v[0] * v[0] + v[1] * v[1] + w * w).sqrt()
    });
    let s = surface.clone();
    let partials = Arc::new(move |_: f64, x: &[f64], v: &[f64], fx: &mut [f64], fv: &mut [f64]| {
        let (p, q) = ((s.p)(x[0], x[1]), (s.q)(x[0], x[1]));
        let (r, ss, t) = ((s.r)(x[0], x[1]), (s.s)(x[0], x[1]), (s.t)(x[0], x[1]));
        let w = p * v[0] + q * v[1];
        let f = (v[0] * v[0] + v[1] * v[1] + w * w).sqrt();
        fx[0] = w * (r * v[0] + ss * v[1]) / f;
        fx[1] = w * (ss * v[0] + t * v[1]) / f;
        fv[0] = (v[0] + w * p) / f;
        fv[1] = (v[1] + w * q) / f;
    });
    Ok(PathFunctional::new(f, 0.0, 1.0, a.to_vec(), b.to_vec())?.with_partials(partials))
}

/// `E = (xdot^2 + ydot^2 + (p xdot + q ydot)^2) / 2` on `t in [0, 1]`.
///
/// Arc length does not depend on the parametrization, so its discrete
/// minimizers can slide nodes along the curve until segments collapse. The
/// energy has the same geodesics, traversed at constant speed, and a
/// nondegenerate discrete Hessian; the direct method minimizes this one.
pub fn geodesic_energy(surface: &SurfaceJet, a: [f64; 2], b: [f64; 2]) -> Result<PathFunctional, VariationalError> {
    let (p, q) = (surface.p.clone(), surface.q.clone());
    let f = Arc::new(move |_: f64, x: &[f64], v: &[f64]| {
        let w = p(x[0], x[1]) * v[0] + q(x[0], x[1]) * v[1];
        0.5 * (v[0] * v[0] + v[1] * v[1] + w * w)
    });
    let s = surface.clone();
    let partials = Arc::new(move |_: f64, x: &[f64], v: &[f64], fx: &mut [f64], fv: &mut [f64]| {
        let (p, q) = ((s.p)(x[0], x[1]), (s.q)(x[0], x[1]));
        let (r, ss, t) = ((s.r)(x[0], x[1]), (s.s)(x[0], x[1]), (s.t)(x[0], x[1]));
        let w = p * v[0] + q * v[1];
        fx[0] = w * (r * v[0] + ss * v[1]);
        fx[1] = w * (ss * v[0] + t * v[1]);
        fv[0] = v[0] + w * p;
        fv[1] = v[1] + w * q;
    });
    Ok(PathFunctional::new(f, 0.0, 1.0, a.to_vec(), b.to_vec())?.with_partials(partials))
}

/// Max distance of the lifted nodes `(x, y, z)` from the plane through the
/// centre containing the lifted endpoints, i.e. from their great circle.
pub fn hemisphere_great_circle_deviation(radius: f64, path: &DiscretePath) -> Result<f64, VariationalError> {
    if path.dim != 2 {
        return Err(VariationalError::InvalidInput("hemisphere paths have two coordinates".into()));
    }
    let lift = |k: usize| {
        let n = path.node(k);
        [n[0], n[1], (radius * radius - n[0] * n[0] - n[1] * n[1]).sqrt()]
    };
    let (a, b) = (lift(0), lift(path.n));
    let normal = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let len = normal.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !(len > 0.0) {
        return Err(VariationalError::InvalidInput("endpoints do not determine a great circle".into()));
    }
    let mut worst = 0.0f64;
    for k in 0..=path.n {
        let p = lift(k);
        let d = (p[0] * normal[0] + p[1] * normal[1] + p[2] * normal[2]).abs() / len;
        if !d.is_finite() {
            return Err(VariationalError::InvalidInput(format!("node {k} leaves the hemisphere")));
        }
        worst = worst.max(d);
    }
    Ok(worst)
}
