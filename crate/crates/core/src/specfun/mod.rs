//! Gamma and Beta functions, modified Bessel functions `I_v` and the
//! hanging-chain solutions built from them.

mod bessel;
mod beta;
mod chain;
mod gamma;

use serde::Serialize;
use thiserror::Error;

use crate::numeric::QuadError;

pub use bessel::{bessel_i_series, BESSEL_MAX_TERMS};
pub use beta::{
    beta_gamma, beta_integral, beta_recurrence, gaussian_integral_check, gaussian_integral_with_cutoff, GaussianCheck,
    GAUSSIAN_CUTOFF,
};
pub use chain::{
    chain_denominator, chain_normalization, chain_ode_residual, chain_solution_integral, chain_solution_series, ChainProblem,
};
pub use gamma::{gamma, ln_gamma};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("gamma has a pole at {0}")]
    Pole(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("series did not reach the tolerance within {terms} terms (tail bound {tail:e})")]
    Budget { terms: usize, tail: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadError),
    #[error("result overflows at {0}")]
    Overflow(f64),
}

/// A value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub est_error: f64,
}
