//! Finite-difference stencils.

/// Step for central differences scaled to the magnitude of `x`.
pub fn central_step(x: f64) -> f64 {
    f64::EPSILON.cbrt() * x.abs().max(1.0)
}

/// Second-order central difference `(f(x+h) - f(x-h)) / 2h`.
pub fn central<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Fourth-order five-point estimates of `(f', f'')` at `x`.
pub fn five_point<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> (f64, f64) {
    let fm2 = f(x - 2.0 * h);
    let fm1 = f(x - h);
    let f0 = f(x);
    let fp1 = f(x + h);
    let fp2 = f(x + 2.0 * h);
    let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    (d1, d2)
}

/// Richardson-extrapolated central difference, error `O(h^4)`.
pub fn richardson<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let d1 = central(&f, x, h);
    let d2 = central(&f, x, 0.5 * h);
    (4.0 * d2 - d1) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_on_exp() {
        let (d1, d2) = five_point(f64::exp, 0.3, 1e-3);
        assert!((d1 - 0.3f64.exp()).abs() < 1e-11);
        assert!((d2 - 0.3f64.exp()).abs() < 1e-7);
        assert!((richardson(f64::sin, 1.0, 1e-3) - 1.0f64.cos()).abs() < 1e-12);
        assert!((central(f64::sin, 1.0, central_step(1.0)) - 1.0f64.cos()).abs() < 1e-9);
    }
}
