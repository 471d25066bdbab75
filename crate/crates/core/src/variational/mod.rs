//! Calculus of variations: functionals of curves and paths, Euler's direct
//! method, Euler-Lagrange residuals, the fundamental lemma and geodesics on
//! surfaces `z = f(x, y)`.

mod builtins;
mod discrete;
mod functional;
mod geodesic;
mod optimize;
mod path;
mod residual;

use thiserror::Error;

use crate::numeric::{IvpError, QuadError};

pub use builtins::{
    arclength, brachistochrone, brachistochrone_depth, brachistochrone_shooting, dirichlet, run_problem, ProblemConfig, ProblemEndpoints,
    ProblemSummary, ShootingOracle, BRACHISTOCHRONE_EPS_START,
};
pub use discrete::{discretize, DiscreteObjective};
pub use functional::{Functional1D, Integrand, IntegrandPartials, PathFunctional, Scalar3};
pub use geodesic::{geodesic_energy, geodesic_functional, hemisphere_great_circle_deviation, SurfaceJet};
pub use optimize::{minimize, MinimizeOptions, MinimizeResult, StepRule};
pub use path::{DiscretePath, FnPath, Jet, SmoothPath, SplinePath};
pub use residual::{
    el_residual, euler_system_residual, first_variation, fundamental_lemma_probe, quartic_bump, random_bump,
    variation_gradient_check, ProbeReport, VariationCheck,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VariationalError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("objective or gradient is not finite at iterate {iteration}")]
    NonFinite { iteration: usize },
    #[error("variation direction does not vanish at the ends (coordinate {coordinate}, value {value})")]
    BumpNotPinned { coordinate: usize, value: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadError),
    #[error("integration failed: {0}")]
    Ivp(#[from] IvpError),
    #[error("shooting failed: {0}")]
    Shooting(String),
}
