//! Exponential-multiplier reduction of `C y'' + B y' + A y = X(x)`.
//!
//! Multiplying by `e^{alpha x}` and integrating once gives
//! `e^{alpha x}(A' y + B' y') = const + int e^{alpha x} X dx` provided
//! `B' = C`, `A' = B - alpha C` and `A - B alpha + C alpha^2 = 0`. The roots
//! `alpha` of that quadratic are the negated roots `-lambda` of the usual
//! characteristic equation `C lambda^2 + B lambda + A = 0`. The remaining
//! first-order equation is solved with the integrating factor `e^{beta x}`,
//! `beta = A'/B'`, which is the other root of the same quadratic.

use std::cell::RefCell;

use num_complex::Complex64;

use super::LinOdeError;
use crate::numeric::{QuadError, Quadrature};

/// Absolute tolerance for both levels of the nested quadrature.
pub const REDUCTION_QUAD_TOL: f64 = 1e-10;

/// Roots of `A - B alpha + C alpha^2 = 0`, larger real part first
/// (positive imaginary part first for a complex pair).
pub fn euler_multiplier_roots(c: f64, b: f64, a: f64) -> Result<[Complex64; 2], LinOdeError> {
    if c == 0.0 || !c.is_finite() || !b.is_finite() || !a.is_finite() {
        return Err(LinOdeError::InvalidInput(format!("need finite coefficients with C != 0 (C={c})")));
    }
    let disc = Complex64::new(b * b - 4.0 * a * c, 0.0).sqrt();
    // numerically stable quadratic roots
    let q = if b >= 0.0 { -0.5 * (-b - disc) } else { -0.5 * (-b + disc) };
    let (r1, r2) = if q.norm() == 0.0 {
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        (q / c, Complex64::new(a, 0.0) / q)
    };
    let mut roots = [r1, r2];
    roots.sort_by(|u, v| v.re.total_cmp(&u.re).then(v.im.total_cmp(&u.im)));
    Ok(roots)
}

/// `y(x)` for the initial-value problem `y(x0) = y0`, `y'(x0) = yp0`.
#[allow(clippy::too_many_arguments)]
pub fn reduce_nonhomogeneous_2nd(
    c: f64,
    b: f64,
    a: f64,
    forcing: &dyn Fn(f64) -> f64,
    x0: f64,
    y0: f64,
    yp0: f64,
    x: f64,
) -> Result<f64, LinOdeError> {
    if !x0.is_finite() || !x.is_finite() || !y0.is_finite() || !yp0.is_finite() {
        return Err(LinOdeError::InvalidInput("interval and initial data must be finite".into()));
    }
    let [alpha, _] = euler_multiplier_roots(c, b, a)?;
    let a_prime = b - alpha * c;
    let b_prime = c;
    let beta = a_prime / b_prime;
    let first_integral = a_prime * y0 + b_prime * yp0;

    let quad = Quadrature::with_tolerance(REDUCTION_QUAD_TOL, 0.0);
    let inner_failure: RefCell<Option<QuadError>> = RefCell::new(None);

    // A' y + B' y' = R(s) = e^{-alpha (s - x0)} (A' y0 + B' y0') + int_{x0}^{s} e^{-alpha (s - t)} X(t) dt
    let rhs = |s: f64| -> Complex64 {
        let homogeneous = (-alpha * (s - x0)).exp() * first_integral;
        match quad.integrate(|t: f64| (-alpha * (s - t)).exp() * forcing(t), x0, s) {
            Ok(est) => homogeneous + est.value,
            Err(e) => {
                inner_failure.borrow_mut().get_or_insert(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        }
    };

    let outer = quad.integrate(|s: f64| (-beta * (x - s)).exp() * rhs(s), x0, x);
    if let Some(e) = inner_failure.into_inner() {
        return Err(e.into());
    }
    let integral = outer?.value;
    let y = (-beta * (x - x0)).exp() * y0 + integral / b_prime;
    Ok(y.re)
}
