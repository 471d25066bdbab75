use std::f64::consts::PI;

use eulerkit::linode::linspace;
use eulerkit::specfun::{
    beta_gamma, beta_integral, beta_recurrence, bessel_i_series, chain_normalization, chain_ode_residual,
    chain_solution_integral, chain_solution_series, gamma, gaussian_integral_check, ChainProblem,
};
use proptest::prelude::*;

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |a, k| a * k as f64)
}

proptest! {
    #[test]
    fn gamma_functional_equation(x in 0.5f64..10.0) {
        let lhs = gamma(x + 1.0).unwrap();
        prop_assert!((lhs - x * gamma(x).unwrap()).abs() <= 1e-12 * lhs);
    }

    #[test]
    fn gamma_reflection(x in 0.01f64..0.99) {
        let lhs = gamma(x).unwrap() * gamma(1.0 - x).unwrap();
        let rhs = PI / (PI * x).sin();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn beta_symmetry_and_recurrence(p in 0.1f64..6.0, q in 0.1f64..6.0) {
        let b = beta_gamma(p, q).unwrap();
        prop_assert!((b - beta_gamma(q, p).unwrap()).abs() <= 1e-14 * b);
        prop_assert!((beta_gamma(p, q + 1.0).unwrap() - q / (p + q) * b).abs() <= 1e-13 * b);
        prop_assert!((beta_gamma(p + 1.0, q).unwrap() - p / (p + q) * b).abs() <= 1e-13 * b);
    }
}

#[test]
fn beta_consistency_triangle() {
    for i in 1..=10 {
        for j in 1..=10 {
            let (p, q) = (0.5 * i as f64, 0.5 * j as f64);
            let (p, q) = (if i == 1 { 0.1 } else { p }, if j == 1 { 0.1 } else { q });
            let a = beta_integral(p, q).unwrap().value;
            let b = beta_gamma(p, q).unwrap();
            let c = beta_recurrence(p, q).unwrap().value;
            assert!((a - b).abs() <= 1e-9 && (a - c).abs() <= 1e-9 && (b - c).abs() <= 1e-9, "p={p} q={q}: {a} {b} {c}");
        }
    }
}

#[test]
fn beta_factorial_formula() {
    for m in 1..=8u32 {
        for n in 1..=8u32 {
            let want = factorial(m - 1) * factorial(n - 1) / factorial(m + n - 1);
            for got in [beta_integral(m as f64, n as f64).unwrap().value, beta_gamma(m as f64, n as f64).unwrap()] {
                assert!((got - want).abs() <= 1e-10 * want, "B({m},{n}) = {got} vs {want}");
            }
        }
    }
}

#[test]
fn quoted_constants() {
    assert!((beta_integral(1.0, 1.0).unwrap().value - 1.0).abs() <= 1e-12);
    assert!((beta_integral(0.5, 0.5).unwrap().value - PI).abs() <= 1e-9);
    assert!((gamma(0.5).unwrap() - PI.sqrt()).abs() <= 1e-12 * PI.sqrt());
    assert!((gaussian_integral_check().unwrap().value - PI.sqrt() / 2.0).abs() <= 1e-10);
}

#[test]
fn chain_series_and_integral_agree() {
    for &n in &[0.0, 0.5, 1.0, 1.5, 2.0] {
        let prob = ChainProblem::new(n, -1.3, 0.7).unwrap();
        let ratio = chain_normalization(n).unwrap();
        // the constant linking the two amplitudes is Gamma(n+1)
        assert!((ratio - gamma(n + 1.0).unwrap()).abs() < 1e-12 * ratio);
        let grid = linspace(0.2, 4.0, 10);
        for &x in &grid {
            let s = ratio * chain_solution_series(&prob, x).unwrap().value;
            let i = chain_solution_integral(&prob, x).unwrap().value;
            assert!((s - i).abs() <= 1e-7, "n={n} x={x}: {s} vs {i}");
        }
        let series = |x: f64| chain_solution_series(&prob, x).unwrap().value;
        let integral = |x: f64| chain_solution_integral(&prob, x).unwrap().value;
        let r_series = chain_ode_residual(&prob, &series, &grid, 1e-3);
        let r_integral = chain_ode_residual(&prob, &integral, &grid, 1e-3);
        assert!(r_series <= 1e-7 && r_integral <= 1e-6, "n={n}: {r_series:e} {r_integral:e}");
    }
}

#[test]
fn bessel_matches_half_integer_forms() {
    for &z in &[0.5f64, 1.0, 2.0] {
        let want = (2.0 / (PI * z)).sqrt() * z.sinh();
        assert!((bessel_i_series(0.5, z, 1e-14).unwrap().value - want).abs() < 1e-14);
    }
}

#[test]
fn evaluations_are_bit_reproducible() {
    let prob = ChainProblem::new(1.5, -0.4, 2.0).unwrap();
    let a: Vec<u64> = (0..5).map(|k| chain_solution_integral(&prob, 0.3 * k as f64).unwrap().value.to_bits()).collect();
    let b: Vec<u64> = (0..5).map(|k| chain_solution_integral(&prob, 0.3 * k as f64).unwrap().value.to_bits()).collect();
    assert_eq!(a, b);
    assert_eq!(beta_integral(0.3, 0.7).unwrap().value.to_bits(), beta_integral(0.3, 0.7).unwrap().value.to_bits());
}
