//! `I_v(z) = sum_k (z/2)^(v+2k) / (k! Gamma(v+k+1))`.

use super::{gamma, ln_gamma, Estimate, SpecFunError};

pub const BESSEL_MAX_TERMS: usize = 10_000;

/// Sums the series until the terms decrease and the geometric bound on the
/// tail drops below `tol * max(1, sum)`. All terms are positive for `v > -1`,
/// so there is no cancellation.
pub fn bessel_i_series(v: f64, z: f64, tol: f64) -> Result<Estimate, SpecFunError> {
    if !(v > -1.0 && v.is_finite()) {
        return Err(SpecFunError::InvalidInput(format!("order must satisfy v > -1, got {v}")));
    }
    if !(z >= 0.0 && z.is_finite()) {
        return Err(SpecFunError::InvalidInput(format!("argument must be finite and non-negative, got {z}")));
    }
    if !(tol > 0.0) {
        return Err(SpecFunError::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    if z == 0.0 {
        let value = if v == 0.0 { 1.0 } else if v > 0.0 { 0.0 } else { f64::INFINITY };
        if value.is_infinite() {
            return Err(SpecFunError::Domain(format!("I_{v}(0) is infinite for negative order")));
        }
        return Ok(Estimate { value, est_error: 0.0 });
    }
    let half = 0.5 * z;
    let x2 = half * half;
    let mut term = match gamma(v + 1.0) {
        Ok(g) if half.powf(v).is_finite() => half.powf(v) / g,
        _ => (v * half.ln() - ln_gamma(v + 1.0)?).exp(),
    };
    let mut sum = term;
    for k in 0..BESSEL_MAX_TERMS {
        let k1 = (k + 1) as f64;
        let ratio = x2 / (k1 * (v + k1));
        term *= ratio;
        sum += term;
        // later ratios are smaller still, so the tail is below a geometric series
        let next_ratio = x2 / ((k1 + 1.0) * (v + k1 + 1.0));
        if next_ratio < 1.0 {
            let tail = term * next_ratio / (1.0 - next_ratio);
            if tail <= tol * sum.max(1.0) {
                if !sum.is_finite() {
                    return Err(SpecFunError::Overflow(z));
                }
                return Ok(Estimate { value: sum, est_error: tail + (k as f64 + 2.0) * f64::EPSILON * sum });
            }
        }
    }
    Err(SpecFunError::Budget { terms: BESSEL_MAX_TERMS, tail: term })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn at_zero() {
        assert_eq!(bessel_i_series(0.0, 0.0, 1e-15).unwrap().value, 1.0);
        assert_eq!(bessel_i_series(1.5, 0.0, 1e-15).unwrap().value, 0.0);
        assert!(bessel_i_series(-0.5, 0.0, 1e-15).is_err());
        assert!(bessel_i_series(-1.0, 1.0, 1e-15).is_err());
    }

    #[test]
    fn half_integer_closed_forms() {
        for &z in &[0.5f64, 1.0, 2.0, 7.5, 20.0] {
            let i_half = (2.0 / (PI * z)).sqrt() * z.sinh();
            let i_mhalf = (2.0 / (PI * z)).sqrt() * z.cosh();
            let a = bessel_i_series(0.5, z, 1e-15).unwrap();
            let b = bessel_i_series(-0.5, z, 1e-15).unwrap();
            assert!((a.value - i_half).abs() <= 1e-14 * i_half.max(1.0), "z={z}");
            assert!((b.value - i_mhalf).abs() <= 1e-14 * i_mhalf.max(1.0), "z={z}");
            assert!(a.est_error < 1e-13 * i_half.max(1.0));
        }
    }

    #[test]
    fn recurrence_in_order() {
        // I_{v-1}(z) - I_{v+1}(z) = (2v/z) I_v(z)
        for &(v, z) in &[(1.0, 0.7), (2.3, 3.0), (0.6, 12.0)] {
            let f = |o: f64| bessel_i_series(o, z, 1e-15).unwrap().value;
            let lhs = f(v - 1.0) - f(v + 1.0);
            assert!((lhs - 2.0 * v / z * f(v)).abs() < 1e-13 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn known_value() {
        // I_0(1) = 1.2660658777520083...
        assert!((bessel_i_series(0.0, 1.0, 1e-16).unwrap().value - 1.266_065_877_752_008_4).abs() < 1e-15);
    }
}
