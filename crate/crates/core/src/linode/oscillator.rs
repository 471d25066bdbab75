//! Forced undamped oscillator `M x'' + K x = F sin(w_a t)` from rest.

use super::LinOdeError;

/// Relative detuning `|w_a - w| / w` below which the secular branch is used.
pub const RESONANCE_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorResponse {
    /// `x(t)` with `x(0) = x'(0) = 0`.
    pub value: f64,
    /// `|F / (K - M w_a^2)|`, infinite at resonance.
    pub steady_amplitude: f64,
    pub resonant: bool,
    pub natural_frequency: f64,
}

pub fn forced_oscillator(m: f64, k: f64, f: f64, w_a: f64, t: f64) -> Result<OscillatorResponse, LinOdeError> {
    if !(m > 0.0 && m.is_finite() && k > 0.0 && k.is_finite()) {
        return Err(LinOdeError::InvalidInput(format!("oscillator needs M > 0 and K > 0 (M={m}, K={k})")));
    }
    if !f.is_finite() || !w_a.is_finite() || !t.is_finite() {
        return Err(LinOdeError::InvalidInput("oscillator inputs must be finite".into()));
    }
    let w = (k / m).sqrt();
    if ((w_a - w) / w).abs() < RESONANCE_THRESHOLD {
        // x = F/(2 M w^2) (sin wt - w t cos wt)
        let value = f / (2.0 * m * w * w) * ((w * t).sin() - w * t * (w * t).cos());
        return Ok(OscillatorResponse { value, steady_amplitude: f64::INFINITY, resonant: true, natural_frequency: w });
    }
    let a = f / (k - m * w_a * w_a);
    let value = a * ((w_a * t).sin() - (w_a / w) * (w * t).sin());
    Ok(OscillatorResponse { value, steady_amplitude: a.abs(), resonant: false, natural_frequency: w })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_oscillation_frequency() {
        let r = forced_oscillator(2.0, 8.0, 0.0, 1.0, 3.0).unwrap();
        assert_eq!(r.natural_frequency, 2.0);
        assert_eq!(r.value, 0.0);
        assert_eq!(r.steady_amplitude, 0.0);
    }

    #[test]
    fn amplitude_by_substitution() {
        let r = forced_oscillator(1.0, 4.0, 1.0, 1.0, 0.0).unwrap();
        assert!((r.steady_amplitude - 1.0 / 3.0).abs() < 1e-15);
        // x_p = a sin t:  -a + 4a = 1
        let a = r.steady_amplitude;
        for &t in &[0.3, 1.1, 2.9] {
            let res = -a * f64::sin(t) + 4.0 * a * f64::sin(t) - f64::sin(t);
            assert!(res.abs() < 1e-15);
        }
    }

    #[test]
    fn amplitude_grows_toward_resonance() {
        let w = 2.0;
        let amps: Vec<f64> = [0.9, 0.99, 0.999]
            .iter()
            .map(|r| forced_oscillator(1.0, 4.0, 1.0, r * w, 0.0).unwrap().steady_amplitude)
            .collect();
        assert!(amps[0] < amps[1] && amps[1] < amps[2]);
        assert!(amps[1] / amps[0] >= 9.0 && amps[2] / amps[1] >= 9.0);
    }

    #[test]
    fn secular_branch_matches_ode() {
        let (m, k, f) = (1.5, 6.0, 0.7);
        let w = 2.0;
        let r = forced_oscillator(m, k, f, w * (1.0 + 1e-10), 5.0).unwrap();
        assert!(r.resonant && r.steady_amplitude.is_infinite());
        // finite-difference residual of M x'' + K x - F sin(w t)
        let x = |t: f64| forced_oscillator(m, k, f, w, t).unwrap().value;
        let h = 1e-3;
        for &t in &[0.5, 2.0, 7.0] {
            let d2 = (-x(t + 2.0 * h) + 16.0 * x(t + h) - 30.0 * x(t) + 16.0 * x(t - h) - x(t - 2.0 * h)) / (12.0 * h * h);
            assert!((m * d2 + k * x(t) - f * (w * t).sin()).abs() < 1e-6);
        }
        assert!(forced_oscillator(-1.0, 1.0, 1.0, 1.0, 0.0).is_err());
    }
}
