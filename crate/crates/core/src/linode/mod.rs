//! Linear ordinary differential equations with constant coefficients.
//!
//! `coeffs[k]` multiplies the k-th derivative, so `[A, B, C]` is
//! `A y + B y' + C y'' = X(x)`. Substituting `y = exp(r x)` turns the
//! homogeneous equation into the characteristic polynomial with the same
//! coefficient list; a root `q` of multiplicity `k` contributes
//! `exp(q x) (c0 + c1 x + ... + c_{k-1} x^{k-1})`.

mod beam;
mod oscillator;
mod reduce;
mod schema;

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::numeric::QuadError;
use crate::polyroots::{find_roots, PolyError, RealPolynomial, RootCluster, DEFAULT_ROOT_TOL};

pub use beam::{beam_closed_form, solve_beam, BeamSolution};
pub use oscillator::{forced_oscillator, OscillatorResponse, RESONANCE_THRESHOLD};
pub use reduce::{euler_multiplier_roots, reduce_nonhomogeneous_2nd, REDUCTION_QUAD_TOL};
pub use schema::{ModeDoc, SolutionDoc};

/// Real-valued forcing term `X(x)`.
pub type Forcing = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinOdeError {
    #[error("invalid equation: {0}")]
    InvalidEquation(String),
    #[error("homogeneous solve requested for a forced equation")]
    ForcingPresent,
    #[error(transparent)]
    Roots(#[from] PolyError),
    #[error("expected {expected} constants, got {got}")]
    ConstantCount { expected: usize, got: usize },
    #[error("expected {expected} conditions, got {got}")]
    ConditionCount { expected: usize, got: usize },
    #[error("conditions {offending:?} are linearly dependent (condition estimate {condition:e})")]
    SingularConditions { offending: Vec<usize>, condition: f64 },
    #[error("fitted constants miss condition {index} by {miss:e}")]
    ConditionsNotMet { index: usize, miss: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("malformed solution document: {0}")]
    Schema(String),
}

/// `sum_k coeffs[k] y^(k) = X(x)`.
#[derive(Clone)]
pub struct ConstCoeffOde {
    coeffs: Vec<f64>,
    forcing: Option<Forcing>,
}

impl fmt::Debug for ConstCoeffOde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConstCoeffOde")
            .field("coeffs", &self.coeffs)
            .field("forced", &self.forcing.is_some())
            .finish()
    }
}

impl ConstCoeffOde {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, LinOdeError> {
        if coeffs.len() < 2 {
            return Err(LinOdeError::InvalidEquation("order must be at least 1".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(LinOdeError::InvalidEquation("coefficients must be finite".into()));
        }
        if *coeffs.last().unwrap() == 0.0 {
            return Err(LinOdeError::InvalidEquation("highest-order coefficient is zero".into()));
        }
        Ok(Self { coeffs, forcing: None })
    }

    pub fn with_forcing(mut self, forcing: Forcing) -> Self {
        self.forcing = Some(forcing);
        self
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn forcing(&self) -> Option<&Forcing> {
        self.forcing.as_ref()
    }
}

pub fn characteristic_polynomial(ode: &ConstCoeffOde) -> RealPolynomial {
    RealPolynomial::new(ode.coeffs.clone()).expect("validated at construction")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Exp,
    Cos,
    Sin,
}

/// Real basis function `x^power exp(re x)` times `cos(im x)`, `sin(im x)` or 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealMode {
    pub re: f64,
    pub im: f64,
    pub power: usize,
    pub kind: ModeKind,
}

/// Values `[y, y', ..., y^(n)]` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub derivatives: Vec<f64>,
    /// An exponential factor overflowed; affected entries are infinite.
    pub overflow: bool,
}

/// Anything that can report analytic derivatives at a point.
pub trait Solution {
    fn derivatives(&self, x: f64, up_to_order: usize) -> Evaluation;
}

/// The n-parameter family spanned by the characteristic roots.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralSolution {
    order: usize,
    clusters: Vec<RootCluster>,
    basis: Vec<RealMode>,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn falling(j: usize, i: usize) -> f64 {
    (0..i).fold(1.0, |acc, t| acc * (j - t) as f64)
}

impl GeneralSolution {
    /// Builds the real basis from roots closed under conjugation.
    pub fn from_roots(mut clusters: Vec<RootCluster>) -> Result<Self, LinOdeError> {
        clusters.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
        for c in &clusters {
            if c.multiplicity == 0 || !c.value.is_finite() {
                return Err(LinOdeError::InvalidInput("root clusters need finite values and positive multiplicity".into()));
            }
            if c.value.im != 0.0 && !clusters.iter().any(|d| d.value == c.value.conj() && d.multiplicity == c.multiplicity) {
                return Err(LinOdeError::InvalidInput(format!("root {} has no conjugate partner", c.value)));
            }
        }
        let order = clusters.iter().map(|c| c.multiplicity).sum();
        let mut basis = Vec::with_capacity(order);
        for c in &clusters {
            let (re, im) = (c.value.re, c.value.im);
            for power in 0..c.multiplicity {
                if im == 0.0 {
                    basis.push(RealMode { re, im: 0.0, power, kind: ModeKind::Exp });
                } else if im > 0.0 {
                    basis.push(RealMode { re, im, power, kind: ModeKind::Cos });
                    basis.push(RealMode { re, im, power, kind: ModeKind::Sin });
                }
            }
        }
        Ok(Self { order, clusters, basis })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn free_constants(&self) -> usize {
        self.order
    }

    pub fn clusters(&self) -> &[RootCluster] {
        &self.clusters
    }

    pub fn basis(&self) -> &[RealMode] {
        &self.basis
    }

    /// Derivatives `0..=up_to` of one real basis function.
    ///
    /// Uses `D^n [e^{ax} cos(bx)] = rho^n e^{ax} cos(bx + n theta)` with
    /// `a + ib = rho e^{i theta}`, combined with Leibniz for the `x^j` factor.
    pub fn basis_derivatives(&self, index: usize, x: f64, up_to: usize) -> (Vec<f64>, bool) {
        let mode = self.basis[index];
        let ex = (mode.re * x).exp();
        let overflow = ex.is_infinite();
        let rho = mode.re.hypot(mode.im);
        let theta = mode.im.atan2(mode.re);
        let base = |n: usize| -> f64 {
            match mode.kind {
                ModeKind::Exp => mode.re.powi(n as i32),
                ModeKind::Cos => rho.powi(n as i32) * (mode.im * x + n as f64 * theta).cos(),
                ModeKind::Sin => rho.powi(n as i32) * (mode.im * x + n as f64 * theta).sin(),
            }
        };
        let out = (0..=up_to)
            .map(|m| {
                let mut poly_part = 0.0;
                for i in 0..=m.min(mode.power) {
                    poly_part += binomial(m, i) * falling(mode.power, i) * x.powi((mode.power - i) as i32) * base(m - i);
                }
                scale_exp(poly_part, ex)
            })
            .collect();
        (out, overflow)
    }

    /// `[y, y', ..., y^(up_to)]` for the given real constants.
    pub fn evaluate(&self, constants: &[f64], x: f64, up_to: usize) -> Result<Evaluation, LinOdeError> {
        self.check_constants(constants)?;
        let mut derivatives = vec![0.0; up_to + 1];
        let mut overflow = false;
        for (j, &c) in constants.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let (vals, of) = self.basis_derivatives(j, x, up_to);
            overflow |= of;
            for (d, v) in derivatives.iter_mut().zip(vals) {
                *d += c * v;
            }
        }
        Ok(Evaluation { derivatives, overflow })
    }

    /// Complex polynomial coefficients of each root's mode, one entry per
    /// cluster (conjugates included), matching the real constants.
    pub fn complex_modes(&self, constants: &[f64]) -> Result<Vec<(Complex64, Vec<Complex64>)>, LinOdeError> {
        self.check_constants(constants)?;
        let mut modes: Vec<(Complex64, Vec<Complex64>)> = self
            .clusters
            .iter()
            .map(|c| (c.value, vec![Complex64::new(0.0, 0.0); c.multiplicity]))
            .collect();
        let mut j = 0;
        while j < self.basis.len() {
            let mode = self.basis[j];
            let root = Complex64::new(mode.re, mode.im);
            match mode.kind {
                ModeKind::Exp => {
                    let slot = modes.iter_mut().find(|(q, _)| *q == root).expect("basis root present");
                    slot.1[mode.power] = Complex64::new(constants[j], 0.0);
                    j += 1;
                }
                ModeKind::Cos => {
                    let (cc, ss) = (constants[j], constants[j + 1]);
                    let upper = Complex64::new(cc / 2.0, -ss / 2.0);
                    for (q, poly) in modes.iter_mut() {
                        if *q == root {
                            poly[mode.power] = upper;
                        } else if *q == root.conj() {
                            poly[mode.power] = upper.conj();
                        }
                    }
                    j += 2;
                }
                ModeKind::Sin => unreachable!("sin modes follow their cos partner"),
            }
        }
        Ok(modes)
    }

    /// Same quantity as [`evaluate`](Self::evaluate), summed over the complex
    /// modes: `D^m [P(x) e^{qx}] = e^{qx} sum_i C(m,i) q^{m-i} P^{(i)}(x)`.
    pub fn evaluate_complex(&self, constants: &[f64], x: f64, up_to: usize) -> Result<Evaluation, LinOdeError> {
        let modes = self.complex_modes(constants)?;
        let mut derivatives = vec![0.0; up_to + 1];
        let mut overflow = false;
        for (q, poly) in &modes {
            let ex = (q * x).exp();
            overflow |= !ex.is_finite();
            // P^{(i)}(x) by Horner on the differentiated coefficient list
            let mut dpoly = poly.clone();
            let mut pd = Vec::with_capacity(up_to + 1);
            for _ in 0..=up_to {
                pd.push(dpoly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c));
                dpoly = dpoly.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
            }
            for (m, d) in derivatives.iter_mut().enumerate() {
                let mut s = Complex64::new(0.0, 0.0);
                for (i, pdi) in pd.iter().enumerate().take(m + 1) {
                    s += binomial(m, i) * q.powu((m - i) as u32) * pdi;
                }
                *d += (s * ex).re;
            }
        }
        Ok(Evaluation { derivatives, overflow })
    }

    fn check_constants(&self, constants: &[f64]) -> Result<(), LinOdeError> {
        if constants.len() != self.order {
            return Err(LinOdeError::ConstantCount { expected: self.order, got: constants.len() });
        }
        Ok(())
    }
}

fn scale_exp(poly_part: f64, ex: f64) -> f64 {
    if poly_part == 0.0 {
        0.0
    } else {
        poly_part * ex
    }
}

/// General solution of a homogeneous equation.
pub fn solve_homogeneous(ode: &ConstCoeffOde) -> Result<GeneralSolution, LinOdeError> {
    if ode.forcing.is_some() {
        return Err(LinOdeError::ForcingPresent);
    }
    let roots = find_roots(&characteristic_polynomial(ode), DEFAULT_ROOT_TOL)?;
    GeneralSolution::from_roots(roots)
}

/// `y^(order)(at) = equals`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Condition {
    pub at: f64,
    pub order: usize,
    pub equals: f64,
}

impl Condition {
    pub fn value(at: f64, equals: f64) -> Self {
        Self { at, order: 0, equals }
    }

    pub fn derivative(at: f64, order: usize, equals: f64) -> Self {
        Self { at, order, equals }
    }
}

/// A general solution with its constants fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticularSolution {
    pub general: GeneralSolution,
    pub constants: Vec<f64>,
    pub provenance: String,
    /// Ratio of extreme singular values of the condition matrix.
    pub condition_estimate: f64,
}

impl ParticularSolution {
    pub fn evaluate(&self, x: f64, up_to: usize) -> Evaluation {
        self.general.evaluate(&self.constants, x, up_to).expect("constant count checked at construction")
    }
}

impl Solution for ParticularSolution {
    fn derivatives(&self, x: f64, up_to_order: usize) -> Evaluation {
        self.evaluate(x, up_to_order)
    }
}

/// A general solution paired with caller-chosen constants.
pub struct WithConstants<'a> {
    pub general: &'a GeneralSolution,
    pub constants: &'a [f64],
}

impl Solution for WithConstants<'_> {
    fn derivatives(&self, x: f64, up_to_order: usize) -> Evaluation {
        self.general
            .evaluate(self.constants, x, up_to_order)
            .unwrap_or(Evaluation { derivatives: vec![f64::NAN; up_to_order + 1], overflow: false })
    }
}

/// Solves for the constants matching `conditions`.
pub fn fit_constants(gs: &GeneralSolution, conditions: &[Condition]) -> Result<ParticularSolution, LinOdeError> {
    let n = gs.free_constants();
    if conditions.len() != n {
        return Err(LinOdeError::ConditionCount { expected: n, got: conditions.len() });
    }
    let mut mat = DMatrix::<f64>::zeros(n, n);
    for (i, cond) in conditions.iter().enumerate() {
        for j in 0..n {
            let (vals, _) = gs.basis_derivatives(j, cond.at, cond.order);
            mat[(i, j)] = vals[cond.order];
        }
    }
    if mat.iter().any(|v| !v.is_finite()) {
        return Err(LinOdeError::InvalidInput("condition matrix is not finite".into()));
    }
    let svd = mat.clone().svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(smin > 1e-13 * smax) {
        let u = svd.u.as_ref().expect("requested");
        let k = sv.imin();
        let col = u.column(k);
        let peak = col.amax();
        let offending = (0..n).filter(|&i| col[i].abs() >= 0.1 * peak).collect();
        return Err(LinOdeError::SingularConditions { offending, condition });
    }
    let rhs = DVector::from_iterator(n, conditions.iter().map(|c| c.equals));
    let sol = mat.clone().lu().solve(&rhs).ok_or(LinOdeError::SingularConditions {
        offending: (0..n).collect(),
        condition,
    })?;
    let constants: Vec<f64> = sol.iter().copied().collect();

    for (i, cond) in conditions.iter().enumerate() {
        let got = gs.evaluate(&constants, cond.at, cond.order)?.derivatives[cond.order];
        let row_scale = (0..n).map(|j| (mat[(i, j)] * constants[j]).abs()).fold(cond.equals.abs(), f64::max);
        let miss = (got - cond.equals).abs();
        if miss > 1e-9 * row_scale.max(1.0) {
            return Err(LinOdeError::ConditionsNotMet { index: i, miss });
        }
    }

    let provenance = conditions
        .iter()
        .map(|c| format!("y^({})({}) = {}", c.order, c.at, c.equals))
        .collect::<Vec<_>>()
        .join(", ");
    Ok(ParticularSolution { general: gs.clone(), constants, provenance, condition_estimate: condition })
}

/// `max_x |sum_k coeffs[k] y^(k)(x) - X(x)|` with analytic derivatives.
pub fn residual(ode: &ConstCoeffOde, sol: &dyn Solution, grid: &[f64]) -> Result<f64, LinOdeError> {
    if grid.is_empty() {
        return Err(LinOdeError::InvalidInput("residual grid is empty".into()));
    }
    let order = ode.order();
    let mut worst = 0.0f64;
    for &x in grid {
        let ev = sol.derivatives(x, order);
        let lhs: f64 = ode.coeffs.iter().zip(&ev.derivatives).map(|(c, d)| c * d).sum();
        let rhs = ode.forcing.as_ref().map_or(0.0, |f| f(x));
        let r = (lhs - rhs).abs();
        worst = if r.is_nan() { f64::NAN } else { worst.max(r) };
        if worst.is_nan() {
            break;
        }
    }
    Ok(worst)
}

/// `n` evenly spaced points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}
