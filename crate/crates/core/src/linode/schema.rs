//! JSON document for solutions:
//! `{order, modes: [{re, im, poly: [[re, im], ...]}], constants: [...]}`.
//!
//! `poly` holds the complex coefficients of `x^0, x^1, ...` multiplying
//! `exp((re + i im) x)`; its length is the root multiplicity. `constants` are
//! the real-basis constants, empty for an unfitted general solution (all
//! `poly` entries are then zero).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GeneralSolution, LinOdeError};
use crate::polyroots::RootCluster;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeDoc {
    pub re: f64,
    pub im: f64,
    pub poly: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub order: usize,
    pub modes: Vec<ModeDoc>,
    pub constants: Vec<f64>,
}

impl SolutionDoc {
    pub fn from_solution(gs: &GeneralSolution, constants: Option<&[f64]>) -> Result<Self, LinOdeError> {
        let modes = match constants {
            Some(c) => gs
                .complex_modes(c)?
                .into_iter()
                .map(|(q, poly)| ModeDoc { re: q.re, im: q.im, poly: poly.iter().map(|z| [z.re, z.im]).collect() })
                .collect(),
            None => gs
                .clusters()
                .iter()
                .map(|c| ModeDoc { re: c.value.re, im: c.value.im, poly: vec![[0.0, 0.0]; c.multiplicity] })
                .collect(),
        };
        Ok(Self { order: gs.order(), modes, constants: constants.map(<[f64]>::to_vec).unwrap_or_default() })
    }

    /// Rebuilds the solution; constants are `None` for an unfitted document.
    pub fn to_solution(&self) -> Result<(GeneralSolution, Option<Vec<f64>>), LinOdeError> {
        let clusters: Vec<RootCluster> = self
            .modes
            .iter()
            .map(|m| RootCluster { value: Complex64::new(m.re, m.im), multiplicity: m.poly.len() })
            .collect();
        if clusters.iter().any(|c| c.multiplicity == 0) {
            return Err(LinOdeError::Schema("every mode needs at least one poly coefficient".into()));
        }
        let gs = GeneralSolution::from_roots(clusters).map_err(|e| LinOdeError::Schema(e.to_string()))?;
        if gs.order() != self.order {
            return Err(LinOdeError::Schema(format!("order {} does not match mode multiplicities ({})", self.order, gs.order())));
        }
        if self.constants.is_empty() {
            if self.modes.iter().flat_map(|m| &m.poly).any(|p| p[0] != 0.0 || p[1] != 0.0) {
                return Err(LinOdeError::Schema("poly coefficients present without constants".into()));
            }
            return Ok((gs, None));
        }
        if self.constants.len() != self.order {
            return Err(LinOdeError::Schema(format!("expected {} constants, got {}", self.order, self.constants.len())));
        }
        let derived = gs.complex_modes(&self.constants)?;
        for m in &self.modes {
            let q = Complex64::new(m.re, m.im);
            let (_, poly) = derived.iter().find(|(r, _)| *r == q).expect("cluster present");
            for (given, want) in m.poly.iter().zip(poly) {
                let tol = 1e-12 * want.norm().max(1.0);
                if (Complex64::new(given[0], given[1]) - want).norm() > tol {
                    return Err(LinOdeError::Schema(format!("poly coefficients of mode {q} disagree with constants")));
                }
            }
        }
        Ok((gs, Some(self.constants.clone())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, LinOdeError> {
        serde_json::from_str(text).map_err(|e| LinOdeError::Schema(e.to_string()))
    }
}
