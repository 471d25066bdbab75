//! `B(p, q) = int_0^1 x^(p-1) (1-x)^(q-1) dx` three ways, and the Gaussian integral.

use serde::Serialize;

use super::{gamma, ln_gamma, Estimate, SpecFunError};
use crate::numeric::Quadrature;

/// Truncation point for `int_0^inf exp(-x^2) dx`; the tail is below `exp(-36)/12`.
pub const GAUSSIAN_CUTOFF: f64 = 6.0;

fn check(p: f64, q: f64) -> Result<(), SpecFunError> {
    if !(p > 0.0 && q > 0.0 && p.is_finite() && q.is_finite()) {
        return Err(SpecFunError::InvalidInput(format!("beta needs finite p, q > 0 (p={p}, q={q})")));
    }
    Ok(())
}

/// `int_0^{1/2} x^(p-1) (1-x)^(q-1) dx`. For `p < 1` the substitution
/// `x = u^(1/p)` turns the integrable singularity at 0 into `(1/p) du`.
fn half(quad: &Quadrature, p: f64, q: f64) -> Result<Estimate, SpecFunError> {
    let est = if p < 1.0 {
        let inv = 1.0 / p;
        let e = quad.integrate(|u: f64| (1.0 - u.powf(inv)).powf(q - 1.0), 0.0, 0.5f64.powf(p))?;
        Estimate { value: e.value * inv, est_error: e.error * inv }
    } else {
        let e = quad.integrate(|x: f64| x.powf(p - 1.0) * (1.0 - x).powf(q - 1.0), 0.0, 0.5)?;
        Estimate { value: e.value, est_error: e.error }
    };
    Ok(est)
}

/// Adaptive quadrature of the defining integral, split at 1/2.
pub fn beta_integral(p: f64, q: f64) -> Result<Estimate, SpecFunError> {
    check(p, q)?;
    let quad = Quadrature::with_tolerance(1e-13, 1e-13);
    let left = half(&quad, p, q)?;
    let right = half(&quad, q, p)?;
    Ok(Estimate { value: left.value + right.value, est_error: left.est_error + right.est_error })
}

/// `Gamma(p) Gamma(q) / Gamma(p + q)`.
pub fn beta_gamma(p: f64, q: f64) -> Result<f64, SpecFunError> {
    check(p, q)?;
    if p + q < 150.0 {
        return Ok(gamma(p)? * gamma(q)? / gamma(p + q)?);
    }
    Ok((ln_gamma(p)? + ln_gamma(q)? - ln_gamma(p + q)?).exp())
}

/// Reduces both arguments into `(0, 1]` with `B(p+1, q) = p/(p+q) B(p, q)`
/// and its mirror, then integrates the base value.
pub fn beta_recurrence(p: f64, q: f64) -> Result<Estimate, SpecFunError> {
    check(p, q)?;
    let (mut a, mut b) = (p, q);
    let mut factor = 1.0;
    while a > 1.0 {
        // B(a, b) = (a-1)/(a+b-1) B(a-1, b)
        factor *= (a - 1.0) / (a + b - 1.0);
        a -= 1.0;
    }
    while b > 1.0 {
        factor *= (b - 1.0) / (a + b - 1.0);
        b -= 1.0;
    }
    let base = beta_integral(a, b)?;
    Ok(Estimate { value: factor * base.value, est_error: factor * base.est_error })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianCheck {
    pub value: f64,
    pub est_error: f64,
    pub cutoff: f64,
    /// Bound on the discarded tail, `exp(-L^2) / (2L)`.
    pub tail_bound: f64,
}

pub fn gaussian_integral_with_cutoff(cutoff: f64) -> Result<GaussianCheck, SpecFunError> {
    let e = Quadrature::with_tolerance(1e-15, 1e-15).integrate(|x: f64| (-x * x).exp(), 0.0, cutoff)?;
    Ok(GaussianCheck { value: e.value, est_error: e.error, cutoff, tail_bound: (-cutoff * cutoff).exp() / (2.0 * cutoff) })
}

/// `int_0^inf exp(-x^2) dx`, which should be `sqrt(pi)/2`.
pub fn gaussian_integral_check() -> Result<GaussianCheck, SpecFunError> {
    gaussian_integral_with_cutoff(GAUSSIAN_CUTOFF)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn quoted_values() {
        assert!((beta_integral(1.0, 1.0).unwrap().value - 1.0).abs() < 1e-12);
        assert!((beta_integral(0.5, 0.5).unwrap().value - PI).abs() < 1e-9);
        assert!((beta_integral(3.0, 4.0).unwrap().value - 1.0 / 60.0).abs() < 1e-12);
        assert!((beta_gamma(2.0, 2.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!((beta_integral(2.0, 2.0).unwrap().value - 1.0 / 6.0).abs() < 1e-13);
    }

    #[test]
    fn small_arguments() {
        // B(0.1, 0.1) = Gamma(0.1)^2 / Gamma(0.2)
        let want = beta_gamma(0.1, 0.1).unwrap();
        let got = beta_integral(0.1, 0.1).unwrap();
        assert!((got.value - want).abs() < 1e-10, "{} vs {want}", got.value);
        assert!((beta_recurrence(4.3, 2.1).unwrap().value - beta_gamma(4.3, 2.1).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn symmetry_and_recurrence() {
        for &(p, q) in &[(0.3, 2.7), (1.9, 0.45), (5.5, 3.25)] {
            let a = beta_integral(p, q).unwrap().value;
            let b = beta_integral(q, p).unwrap().value;
            assert!((a - b).abs() < 1e-12);
            let up = beta_integral(p, q + 1.0).unwrap().value;
            assert!((up - q / (p + q) * a).abs() < 1e-11);
        }
        assert!(beta_integral(0.0, 1.0).is_err());
        assert!(beta_gamma(1.0, -1.0).is_err());
    }

    #[test]
    fn gaussian() {
        let g = gaussian_integral_check().unwrap();
        assert!((g.value - PI.sqrt() / 2.0).abs() < 1e-10);
        assert!(g.tail_bound < 1e-14);
        let doubled = gaussian_integral_with_cutoff(2.0 * GAUSSIAN_CUTOFF).unwrap();
        assert!((doubled.value - g.value).abs() < 1e-12);
        assert!((4.0 * g.value * g.value - PI).abs() < 1e-9);
    }
}
