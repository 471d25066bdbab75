//! First-order equations: exactness, separation of variables, Clairaut
//! envelopes and Riccati linearization.

mod clairaut;
mod exact;
mod riccati;
mod separable;

use std::sync::Arc;

use thiserror::Error;

use crate::numeric::{IvpError, QuadError};

pub use crate::numeric::integrate_ivp;
pub use clairaut::{clairaut_envelope, ClairautFamily, Envelope, EnvelopePoint, DEGENERACY_THRESHOLD};
pub use exact::{exactness_check, ExactnessReport, PlaneField, Rect, EXACTNESS_STEP_FRACTION};
pub use riccati::{
    riccati_linearize, riccati_solve, LinearizedRiccati, RiccatiParticular, DERIVATION_TOL, RESIDUAL_GATE,
};
pub use separable::{isochrone_closed_form, polyline_csv, solve_separable, ImplicitSolution};

/// Scalar function of one variable.
pub type Func1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// Scalar function of `(x, y)`.
pub type Func2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FirstOrderError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("integrand in {variable} is singular near {variable} = {at}")]
    SingularIntegrand { variable: char, at: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadError),
    #[error("integration failed: {0}")]
    Ivp(#[from] IvpError),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("every grid point failed to evaluate")]
    NoValidPoints,
    #[error("particular solution misses the equation by {residual:e} at x = {at}")]
    ResidualGate { residual: f64, at: f64 },
    #[error("linearization check failed by {miss:e} at x = {at}")]
    DerivationMismatch { miss: f64, at: f64 },
    #[error("z0 equals v(x0) = {v0}; u0 = 1/(z0 - v(x0)) is undefined")]
    DegenerateStart { v0: f64 },
    #[error("solution has a pole in [{lo}, {hi}]")]
    Pole { lo: f64, hi: f64 },
    #[error("level-set tracing did not converge at x = {at}")]
    TracingFailed { at: f64 },
}
