//! Numerical building blocks shared by the solvers and their oracles.

pub mod diff;
pub mod ivp;
pub mod quad;
pub mod spline;

pub use ivp::{integrate_ivp, integrate_ivp_observed, IvpError, IvpOptions};
pub use quad::{QuadError, QuadEstimate, QuadValue, Quadrature};
pub use spline::CubicSpline;
