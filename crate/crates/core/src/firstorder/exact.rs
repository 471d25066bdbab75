//! Exactness of `M dx + N dy = 0`: the test `dM/dy = dN/dx` on a grid.

use super::{FirstOrderError, Func2};

/// Finite-difference step as a fraction of the domain extent along each axis.
pub const EXACTNESS_STEP_FRACTION: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Rect {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Result<Self, FirstOrderError> {
        let ok = [x_lo, x_hi, y_lo, y_hi].iter().all(|v| v.is_finite()) && x_lo < x_hi && y_lo < y_hi;
        if !ok {
            return Err(FirstOrderError::InvalidInput(format!(
                "rectangle [{x_lo}, {x_hi}] x [{y_lo}, {y_hi}] must be finite and non-empty"
            )));
        }
        Ok(Self { x_lo, x_hi, y_lo, y_hi })
    }

    /// The rectangle with the axes exchanged.
    pub fn transposed(&self) -> Self {
        Self { x_lo: self.y_lo, x_hi: self.y_hi, y_lo: self.x_lo, y_hi: self.x_hi }
    }
}

#[derive(Clone)]
pub struct PlaneField {
    pub m: Func2,
    pub n: Func2,
    pub domain: Rect,
}

impl PlaneField {
    pub fn new(m: Func2, n: Func2, domain: Rect) -> Self {
        Self { m, n, domain }
    }

    /// `(M, N, x, y) -> (N, M, y, x)`.
    pub fn relabeled(&self) -> Self {
        let (m, n) = (self.m.clone(), self.n.clone());
        Self {
            m: std::sync::Arc::new(move |u, v| n(v, u)),
            n: std::sync::Arc::new(move |u, v| m(v, u)),
            domain: self.domain.transposed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactnessReport {
    pub exact: bool,
    pub max_deviation: f64,
    /// Grid point where the deviation peaks.
    pub worst_at: (f64, f64),
    /// Grid points skipped because a stencil value was not finite.
    pub excluded: Vec<(f64, f64)>,
    pub step: (f64, f64),
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

/// Max of `|dM/dy - dN/dx|` over a `grid_n x grid_n` grid covering the domain.
pub fn exactness_check(field: &PlaneField, grid_n: usize, tol: f64) -> Result<ExactnessReport, FirstOrderError> {
    if grid_n < 2 {
        return Err(FirstOrderError::InvalidInput(format!("grid_n must be at least 2, got {grid_n}")));
    }
    if !(tol >= 0.0) {
        return Err(FirstOrderError::InvalidInput(format!("tolerance must be non-negative, got {tol}")));
    }
    let d = field.domain;
    let hx = (d.x_hi - d.x_lo) * EXACTNESS_STEP_FRACTION;
    let hy = (d.y_hi - d.y_lo) * EXACTNESS_STEP_FRACTION;
    let mut max_deviation = 0.0f64;
    let mut worst_at = (f64::NAN, f64::NAN);
    let mut excluded = Vec::new();
    for &x in &grid(d.x_lo, d.x_hi, grid_n) {
        for &y in &grid(d.y_lo, d.y_hi, grid_n) {
            let my = ((field.m)(x, y + hy) - (field.m)(x, y - hy)) / (2.0 * hy);
            let nx = ((field.n)(x + hx, y) - (field.n)(x - hx, y)) / (2.0 * hx);
            let dev = (my - nx).abs();
            if !dev.is_finite() {
                excluded.push((x, y));
            } else if dev > max_deviation || worst_at.0.is_nan() {
                max_deviation = dev;
                worst_at = (x, y);
            }
        }
    }
    if worst_at.0.is_nan() {
        return Err(FirstOrderError::NoValidPoints);
    }
    Ok(ExactnessReport { exact: max_deviation <= tol, max_deviation, worst_at, excluded, step: (hx, hy) })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    fn field(m: impl Fn(f64, f64) -> f64 + Send + Sync + 'static, n: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> PlaneField {
        PlaneField::new(Arc::new(m), Arc::new(n), Rect::new(-2.0, 2.0, -1.0, 3.0).unwrap())
    }

    #[test]
    fn gradient_of_x2y() {
        let r = exactness_check(&field(|x, y| 2.0 * x * y, |x, _| x * x), 21, 1e-8).unwrap();
        assert!(r.exact, "{}", r.max_deviation);
        assert!(r.excluded.is_empty());
    }

    #[test]
    fn rotation_field_deviates_by_two() {
        let r = exactness_check(&field(|_, y| y, |x, _| -x), 11, 1e-8).unwrap();
        assert!(!r.exact);
        assert!((r.max_deviation - 2.0).abs() < 1e-9);
    }

    #[test]
    fn differential_of_sin_xy() {
        // d sin(xy) = y cos(xy) dx + x cos(xy) dy
        let r = exactness_check(&field(|x, y| y * (x * y).cos(), |x, y| x * (x * y).cos()), 31, 1e-6).unwrap();
        assert!(r.exact, "{}", r.max_deviation);
        // independent check of the symbolic partials: both equal cos(xy) - xy sin(xy)
        let (x, y) = (0.7f64, -0.4f64);
        let h = 1e-6;
        let my = ((y + h) * (x * (y + h)).cos() - (y - h) * (x * (y - h)).cos()) / (2.0 * h);
        assert!((my - ((x * y).cos() - x * y * (x * y).sin())).abs() < 1e-8);
    }

    #[test]
    fn relabeling_gives_identical_deviation() {
        let f = field(|x, y| x.exp() * y + y * y, |x, y| x * x * y.sin());
        let a = exactness_check(&f, 17, 1e-6).unwrap();
        let b = exactness_check(&f.relabeled(), 17, 1e-6).unwrap();
        assert_eq!(a.max_deviation, b.max_deviation);
        assert_eq!(a.worst_at, (b.worst_at.1, b.worst_at.0));
    }

    #[test]
    fn failing_points_are_excluded() {
        let f = PlaneField::new(
            Arc::new(|x, y| if x > 0.9 { f64::NAN } else { 2.0 * x * y }),
            Arc::new(|x, _| x * x),
            Rect::new(0.0, 1.0, 0.0, 1.0).unwrap(),
        );
        let r = exactness_check(&f, 11, 1e-8).unwrap();
        assert!(r.exact);
        assert_eq!(r.excluded.len(), 11);
        assert!(r.excluded.iter().all(|p| p.0 == 1.0));
        assert!(exactness_check(&f, 1, 1e-8).is_err());
    }
}
