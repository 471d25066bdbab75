//! Hanging chain with weight proportional to `x^n`:
//! `x/(n+1) y'' + y' + y/alpha = 0`.
//!
//! With `q = -(n+1) x / alpha` the bounded solution is
//! `y = A q^(-n/2) I_n(2 sqrt q)`, and Poisson's integral for `I_n` gives the
//! equivalent form `A int_0^1 (1-t^2)^((2n-1)/2) cosh(2t sqrt q) dt / int_0^1 (1-t^2)^((2n-1)/2) dt`.
//! Both are evaluated for `q >= 0` only, where they are real.

use std::f64::consts::FRAC_PI_2;

use super::{bessel_i_series, gamma, Estimate, SpecFunError};
use crate::numeric::diff::five_point;
use crate::numeric::Quadrature;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainProblem {
    pub n: f64,
    pub alpha: f64,
    pub amplitude: f64,
}

impl ChainProblem {
    pub fn new(n: f64, alpha: f64, amplitude: f64) -> Result<Self, SpecFunError> {
        if !(n > -1.0 && n.is_finite()) {
            return Err(SpecFunError::InvalidInput(format!("weight exponent must satisfy n > -1, got {n}")));
        }
        if alpha == 0.0 || !alpha.is_finite() || !amplitude.is_finite() {
            return Err(SpecFunError::InvalidInput(format!("need finite alpha != 0 and finite A (alpha={alpha}, A={amplitude})")));
        }
        Ok(Self { n, alpha, amplitude })
    }

    pub fn q(&self, x: f64) -> f64 {
        -(self.n + 1.0) * x / self.alpha
    }

    fn checked_q(&self, x: f64) -> Result<f64, SpecFunError> {
        if !x.is_finite() {
            return Err(SpecFunError::InvalidInput(format!("x must be finite, got {x}")));
        }
        let q = self.q(x);
        if q < 0.0 {
            return Err(SpecFunError::Domain(format!(
                "q = -(n+1) x / alpha = {q} < 0: x = {x} and alpha = {} have the same sign",
                self.alpha
            )));
        }
        Ok(q)
    }
}

/// `A q^(-n/2) I_n(2 sqrt q)`; at `q = 0` the limit `A / Gamma(n+1)`.
pub fn chain_solution_series(prob: &ChainProblem, x: f64) -> Result<Estimate, SpecFunError> {
    let q = prob.checked_q(x)?;
    if prob.amplitude == 0.0 {
        return Ok(Estimate { value: 0.0, est_error: 0.0 });
    }
    if q == 0.0 {
        return Ok(Estimate { value: prob.amplitude / gamma(prob.n + 1.0)?, est_error: 0.0 });
    }
    let i = bessel_i_series(prob.n, 2.0 * q.sqrt(), 1e-16)?;
    let scale = prob.amplitude * q.powf(-0.5 * prob.n);
    Ok(Estimate { value: scale * i.value, est_error: (scale * i.est_error).abs() })
}

fn quad() -> Quadrature {
    Quadrature::with_tolerance(1e-15, 1e-14)
}

/// `int_0^1 (1-t^2)^((2n-1)/2) dt`, through `t = sin(theta)`.
pub fn chain_denominator(n: f64) -> Result<Estimate, SpecFunError> {
    if !(n > -0.5 && n.is_finite()) {
        return Err(SpecFunError::InvalidInput(format!("integral form needs n > -1/2, got {n}")));
    }
    let e = quad().integrate(|th: f64| th.cos().powf(2.0 * n), 0.0, FRAC_PI_2)?;
    Ok(Estimate { value: e.value, est_error: e.error })
}

/// Integral form, normalized so that `y(0) = A`.
pub fn chain_solution_integral(prob: &ChainProblem, x: f64) -> Result<Estimate, SpecFunError> {
    let q = prob.checked_q(x)?;
    let den = chain_denominator(prob.n)?;
    let s = 2.0 * q.sqrt();
    let n2 = 2.0 * prob.n;
    // (1-t^2)^((2n-1)/2) dt = cos^(2n) theta d theta
    let num = quad().integrate(|th: f64| th.cos().powf(n2) * (s * th.sin()).cosh(), 0.0, FRAC_PI_2)?;
    let value = prob.amplitude * num.value / den.value;
    let rel = num.error / num.value.abs() + den.est_error / den.value;
    Ok(Estimate { value, est_error: value.abs() * rel })
}

/// `y_integral(0) / y_series(0)` for unit amplitude; multiplying the series
/// form by it gives the integral form.
pub fn chain_normalization(n: f64) -> Result<f64, SpecFunError> {
    let prob = ChainProblem::new(n, -1.0, 1.0)?;
    Ok(chain_solution_integral(&prob, 0.0)?.value / chain_solution_series(&prob, 0.0)?.value)
}

/// Max over `grid` of `|x/(n+1) y'' + y' + y/alpha|`, with derivatives from
/// five-point differences of step `h`.
pub fn chain_ode_residual(prob: &ChainProblem, y: &dyn Fn(f64) -> f64, grid: &[f64], h: f64) -> f64 {
    grid.iter()
        .map(|&x| {
            let (d1, d2) = five_point(y, x, h);
            (x / (prob.n + 1.0) * d2 + d1 + y(x) / prob.alpha).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linode::linspace;
    use crate::specfun::beta_gamma;

    #[test]
    fn limits_at_zero() {
        for &n in &[0.0, 0.5, 2.0] {
            let p = ChainProblem::new(n, -2.0, 3.0).unwrap();
            let s = chain_solution_series(&p, 0.0).unwrap().value;
            assert!((s - 3.0 / gamma(n + 1.0).unwrap()).abs() < 1e-15);
            // just off zero the series approaches the limit
            assert!((chain_solution_series(&p, 1e-9).unwrap().value - s).abs() < 1e-8);
            assert_eq!(chain_solution_integral(&p, 0.0).unwrap().value, 3.0);
        }
        let zero = ChainProblem::new(1.0, -1.0, 0.0).unwrap();
        assert_eq!(chain_solution_series(&zero, 2.0).unwrap().value, 0.0);
    }

    #[test]
    fn wrong_sign_is_a_domain_error() {
        let p = ChainProblem::new(1.0, 2.0, 1.0).unwrap();
        assert!(matches!(chain_solution_series(&p, 1.0), Err(SpecFunError::Domain(_))));
        assert!(matches!(chain_solution_integral(&p, 1.0), Err(SpecFunError::Domain(_))));
        assert!(chain_solution_series(&p, -1.0).is_ok());
        assert!(ChainProblem::new(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn denominator_is_half_a_beta() {
        for &n in &[0.0, 0.5, 1.0, 2.75] {
            let d = chain_denominator(n).unwrap().value;
            assert!((d - 0.5 * beta_gamma(0.5, n + 0.5).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn both_forms_solve_the_equation() {
        for &n in &[0.0, 1.5] {
            let p = ChainProblem::new(n, -0.8, 1.0).unwrap();
            let grid = linspace(0.1, 3.0, 20);
            let series = |x: f64| chain_solution_series(&p, x).unwrap().value;
            let integral = |x: f64| chain_solution_integral(&p, x).unwrap().value;
            assert!(chain_ode_residual(&p, &series, &grid, 1e-3) < 1e-7);
            assert!(chain_ode_residual(&p, &integral, &grid, 1e-3) < 1e-6);
            let ratio = chain_normalization(n).unwrap();
            for &x in &grid {
                assert!((ratio * series(x) - integral(x)).abs() < 1e-9 * integral(x).abs());
            }
            assert!(chain_ode_residual(&p, &|_| 2.0, &[1.0], 1e-3) - 2.0 / 0.8 < 1e-12);
        }
    }
}
