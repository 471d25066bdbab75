//! Riccati equations `z' + z^2 = F(x)` with `F = a x^n`.
//!
//! A known solution `v` linearizes the equation: substituting `z = v + 1/u`
//! and cancelling `v' + v^2 = F` leaves `u' = 1 + 2 v u`, which is solved by
//! the integrating factor `E = exp(int 2v)`: `u = E (u0 + int dt / E)`.

use std::sync::Arc;

use super::{FirstOrderError, Func1};
use crate::numeric::diff::richardson;
use crate::numeric::Quadrature;

/// Largest accepted `|v' + v^2 - F|` on the working interval.
pub const RESIDUAL_GATE: f64 = 1e-8;
/// Relative slack for the numerical re-check of the substitution.
pub const DERIVATION_TOL: f64 = 1e-8;

const GATE_POINTS: usize = 201;
const SOLVE_PIECES: usize = 64;

#[derive(Clone)]
pub struct RiccatiParticular {
    pub v: Func1,
    /// Richardson differences of `v` when absent.
    pub dv: Option<Func1>,
}

impl RiccatiParticular {
    pub fn new(v: Func1, dv: Func1) -> Self {
        Self { v, dv: Some(dv) }
    }

    pub fn numeric(v: Func1) -> Self {
        Self { v, dv: None }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match &self.dv {
            Some(dv) => dv(x),
            None => richardson(|t| (self.v)(t), x, 1e-3 * x.abs().max(1.0)),
        }
    }
}

fn power(a: f64, n: f64) -> Func1 {
    if n.fract() == 0.0 && n.abs() < i32::MAX as f64 {
        let k = n as i32;
        Arc::new(move |x: f64| a * x.powi(k))
    } else {
        Arc::new(move |x: f64| a * x.powf(n))
    }
}

#[derive(Clone)]
pub struct LinearizedRiccati {
    pub forcing: Func1,
    pub particular: RiccatiParticular,
    pub interval: [f64; 2],
    /// Measured `max |v' + v^2 - F|` over the interval.
    pub residual: f64,
}

impl std::fmt::Debug for LinearizedRiccati {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LinearizedRiccati").field("interval", &self.interval).field("residual", &self.residual).finish()
    }
}

impl LinearizedRiccati {
    /// Linearizes `z' + z^2 = forcing(x)` about `particular` on `interval`.
    pub fn with_forcing(forcing: Func1, particular: RiccatiParticular, interval: [f64; 2]) -> Result<Self, FirstOrderError> {
        let [lo, hi] = interval;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(FirstOrderError::InvalidInput(format!("bad interval [{lo}, {hi}]")));
        }
        let mut worst = (0.0f64, lo);
        for i in 0..GATE_POINTS {
            let x = if i + 1 == GATE_POINTS { hi } else { lo + (hi - lo) * i as f64 / (GATE_POINTS - 1) as f64 };
            let v = (particular.v)(x);
            let dv = particular.derivative(x);
            let f = forcing(x);
            let r = (dv + v * v - f).abs();
            if !(r <= RESIDUAL_GATE) {
                return Err(FirstOrderError::ResidualGate { residual: if r.is_nan() { f64::INFINITY } else { r }, at: x });
            }
            if r > worst.0 {
                worst = (r, x);
            }
            // substitute z = v + 1/u with u' = 1 + 2 v u back into z' + z^2 - F
            for u in [0.5, -2.0, 7.0] {
                let du = 1.0 + 2.0 * v * u;
                let z = v + 1.0 / u;
                let dz = dv - du / (u * u);
                let miss = dz + z * z - f;
                let scale = 1.0 + z * z + dv.abs() + f.abs() + (du / (u * u)).abs();
                if (miss - (dv + v * v - f)).abs() > DERIVATION_TOL * scale {
                    return Err(FirstOrderError::DerivationMismatch { miss, at: x });
                }
            }
        }
        Ok(Self { forcing, particular, interval, residual: worst.0 })
    }

    /// Coefficient `p` of `u' = 1 + p(x) u`.
    pub fn coefficient(&self, x: f64) -> f64 {
        2.0 * (self.particular.v)(x)
    }

    pub fn u_rhs(&self, x: f64, u: f64) -> f64 {
        1.0 + self.coefficient(x) * u
    }

    pub fn z_from_u(&self, x: f64, u: f64) -> f64 {
        (self.particular.v)(x) + 1.0 / u
    }

    /// `z(x)` for `z(x0) = z0`, or the bracket of the first pole of `z`.
    pub fn solve(&self, x0: f64, z0: f64, x: f64) -> Result<f64, FirstOrderError> {
        let [lo, hi] = self.interval;
        if !(x0.is_finite() && x.is_finite() && z0.is_finite()) || x0.min(x) < lo || x0.max(x) > hi {
            return Err(FirstOrderError::InvalidInput(format!("[{x0}, {x}] must lie in the linearization interval [{lo}, {hi}]")));
        }
        let v0 = (self.particular.v)(x0);
        if z0 == v0 {
            return Err(FirstOrderError::DegenerateStart { v0 });
        }
        let u0 = 1.0 / (z0 - v0);
        if !u0.is_finite() {
            return Err(FirstOrderError::DegenerateStart { v0 });
        }
        if x == x0 {
            return Ok(z0);
        }

        let quad = Quadrature::with_tolerance(1e-14, 1e-12);
        let v = &self.particular.v;
        // L(t) = int_{x0}^{t} 2v, J(t) = int_{x0}^{t} e^{-L}; u = e^{L} (u0 + J)
        let log_factor = |l0: f64, s0: f64, t: f64| -> Result<f64, FirstOrderError> {
            Ok(l0 + quad.integrate(|r| 2.0 * v(r), s0, t)?.value)
        };
        let piece_j = |l0: f64, s0: f64, t: f64| -> Result<f64, FirstOrderError> {
            let mut failure = None;
            let est = quad.integrate(
                |r| match log_factor(l0, s0, r) {
                    Ok(l) => (-l).exp(),
                    Err(e) => {
                        failure.get_or_insert(e);
                        f64::NAN
                    }
                },
                s0,
                t,
            );
            if let Some(e) = failure {
                return Err(e);
            }
            Ok(est?.value)
        };

        let (mut l, mut j) = (0.0, 0.0);
        let mut s = x0;
        for i in 1..=SOLVE_PIECES {
            let t = if i == SOLVE_PIECES { x } else { x0 + (x - x0) * i as f64 / SOLVE_PIECES as f64 };
            let j_next = j + piece_j(l, s, t)?;
            let w = u0 + j_next;
            if w == 0.0 || w.signum() != u0.signum() {
                // J is monotone, so this is the only crossing; narrow it down
                let (mut a, mut b) = (s, t);
                for _ in 0..40 {
                    let mid = 0.5 * (a + b);
                    let wm = u0 + j + piece_j(l, s, mid)?;
                    if wm != 0.0 && wm.signum() == u0.signum() {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                return Err(FirstOrderError::Pole { lo: a.min(b), hi: a.max(b) });
            }
            l = log_factor(l, s, t)?;
            j = j_next;
            s = t;
        }
        let z = v(x) + (-l).exp() / (u0 + j);
        if !z.is_finite() {
            return Err(FirstOrderError::Domain(format!("z overflowed at x = {x}")));
        }
        Ok(z)
    }
}

/// Linearization of `z' + z^2 = a x^n` about `particular`, gated on its residual.
pub fn riccati_linearize(a: f64, n: f64, particular: RiccatiParticular, interval: [f64; 2]) -> Result<LinearizedRiccati, FirstOrderError> {
    if !a.is_finite() || !n.is_finite() {
        return Err(FirstOrderError::InvalidInput(format!("a and n must be finite (a={a}, n={n})")));
    }
    LinearizedRiccati::with_forcing(power(a, n), particular, interval)
}

pub fn riccati_solve(a: f64, n: f64, particular: RiccatiParticular, x0: f64, z0: f64, x: f64) -> Result<f64, FirstOrderError> {
    riccati_linearize(a, n, particular, [x0.min(x), x0.max(x)])?.solve(x0, z0, x)
}
