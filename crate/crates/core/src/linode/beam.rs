//! Transverse deflection of an elastic bar, `K^4 y'''' = y`.
//!
//! `x` is measured from the free end. The solution
//! `y = A [(cos u + cosh u) - (sin u + sinh u) / b]`, `u = x / K`, has
//! `y''(0) = y'''(0) = 0`, and `b` is fixed by `y(l) = 0`.

use super::{solve_homogeneous, ConstCoeffOde, LinOdeError, ModeKind, ParticularSolution};

#[derive(Debug, Clone)]
pub struct BeamSolution {
    pub ode: ConstCoeffOde,
    pub solution: ParticularSolution,
    pub b: f64,
}

fn beam_b(k: f64, l: f64) -> f64 {
    let u = l / k;
    (u.sin() + u.sinh()) / (u.cos() + u.cosh())
}

/// Direct evaluation of the closed form, independent of the mode machinery.
pub fn beam_closed_form(k: f64, l: f64, amplitude: f64, x: f64) -> f64 {
    let b = beam_b(k, l);
    let u = x / k;
    amplitude * ((u.cos() + u.cosh()) - (u.sin() + u.sinh()) / b)
}

pub fn solve_beam(k: f64, l: f64, amplitude: f64) -> Result<BeamSolution, LinOdeError> {
    if !(k > 0.0 && k.is_finite()) || !(l > 0.0 && l.is_finite()) || !amplitude.is_finite() {
        return Err(LinOdeError::InvalidInput(format!("beam needs K > 0, l > 0 and finite A (K={k}, l={l}, A={amplitude})")));
    }
    let ode = ConstCoeffOde::new(vec![-1.0, 0.0, 0.0, 0.0, k.powi(4)])?;
    let general = solve_homogeneous(&ode)?;
    let b = beam_b(k, l);

    // cosh u = (e^u + e^-u)/2, sinh u = (e^u - e^-u)/2
    let constants = general
        .basis()
        .iter()
        .map(|mode| match mode.kind {
            ModeKind::Cos => amplitude,
            ModeKind::Sin => -amplitude / b,
            ModeKind::Exp if mode.re > 0.0 => 0.5 * amplitude * (1.0 - 1.0 / b),
            ModeKind::Exp => 0.5 * amplitude * (1.0 + 1.0 / b),
        })
        .collect();

    Ok(BeamSolution {
        ode,
        solution: ParticularSolution {
            general,
            constants,
            provenance: format!("free end at x=0 (y''=y'''=0), y(0)=2A, y(l)=0 with l={l}, K={k}, A={amplitude}"),
            condition_estimate: 1.0,
        },
        b,
    })
}
