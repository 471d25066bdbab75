use std::f64::consts::PI;
use std::sync::Arc;

use eulerkit::variational::{
    arclength, discretize, dirichlet, euler_system_residual, fundamental_lemma_probe, geodesic_energy, geodesic_functional,
    minimize, run_problem, variation_gradient_check, random_bump, DiscretePath, FnPath, MinimizeOptions, PathFunctional,
    ProblemConfig, SplinePath, SurfaceJet,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

fn perturbed(functional: &PathFunctional, n: usize, amp: f64, freq: f64) -> DiscretePath {
    let mut p = DiscretePath::straight(functional, n).unwrap();
    let d = p.dim;
    for (j, y) in p.interior_mut().iter_mut().enumerate() {
        let k = j / d + 1;
        *y += amp * (freq * k as f64 + (j % d) as f64).sin();
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn minimize_keeps_endpoints_and_descends(a in -1.0f64..1.0, b in -1.0f64..1.0, amp in 0.01f64..0.5, freq in 0.1f64..3.0) {
        let f = arclength(0.0, 1.0, vec![a, -b], vec![b, a]).unwrap();
        let obj = discretize(&f, 30).unwrap();
        let init = perturbed(&f, 30, amp, freq);
        let r = minimize(&obj, &init, &MinimizeOptions { grad_tol: 1e-8, ..Default::default() }).unwrap();
        prop_assert_eq!(r.path.node(0), init.node(0));
        prop_assert_eq!(r.path.node(30), init.node(30));
        prop_assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(r.converged);
    }

    #[test]
    fn numeric_surface_partials_are_symmetric(c in prop::collection::vec(-1.0f64..1.0, 4), x in -0.5f64..0.5, y in -0.5f64..0.5) {
        let (c0, c1, c2, c3) = (c[0], c[1], c[2], c[3]);
        let jet = SurfaceJet::numeric(Arc::new(move |x: f64, y: f64| c0 * x * x * y + c1 * (x + c2 * y).sin() + c3 * (x * y).exp()));
        prop_assert!(jet.mixed_partial_asymmetry(x, y) <= 1e-6);
    }
}

#[test]
fn argmin_is_invariant_under_scaling() {
    let base = dirichlet(1.5, 0.0, 2.0, vec![0.3, -1.0], vec![1.0, 0.5]).unwrap();
    // a non-quadratic integrand as well: |xdot| + x^2
    let f = Arc::new(|_: f64, x: &[f64], v: &[f64]| (1.0 + v[0] * v[0]).sqrt() + 0.5 * x[0] * x[0]);
    let other = PathFunctional::new(f, 0.0, 1.0, vec![0.0], vec![1.0]).unwrap();
    for functional in [base, other] {
        let n = 40;
        let opts = MinimizeOptions { grad_tol: 1e-8, ..Default::default() };
        let reference = minimize(&discretize(&functional, n).unwrap(), &perturbed(&functional, n, 0.2, 0.7), &opts).unwrap();
        for c in [0.1, 10.0] {
            let scaled = functional.scaled(c);
            let r = minimize(&discretize(&scaled, n).unwrap(), &perturbed(&scaled, n, 0.2, 0.7), &opts).unwrap();
            assert!(r.converged);
            let dev = r.path.ordinates.iter().zip(&reference.path.ordinates).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(dev <= 1e-6, "c={c}: {dev}");
        }
    }
}

#[test]
fn first_variation_scales_with_step_and_vanishes_at_minimizers() {
    let f = dirichlet(2.0, 0.0, 1.0, vec![0.0, 1.0], vec![1.0, 0.0]).unwrap();
    let obj = discretize(&f, 25).unwrap();
    let path = perturbed(&f, 25, 0.3, 1.1);
    let a = variation_gradient_check(&obj, &path, 1e-3, 10, 99).unwrap().max_relative;
    let b = variation_gradient_check(&obj, &path, 5e-4, 10, 99).unwrap().max_relative;
    assert!((a / b - 2.0).abs() <= 0.2, "{a} / {b}");

    let opts = MinimizeOptions::default();
    let r = minimize(&obj, &path, &opts).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = obj.gradient(&r.path);
    for _ in 0..10 {
        let bump = random_bump(&r.path, &mut rng);
        let first: f64 = g.iter().zip(&bump).map(|(g, h)| g * h).sum();
        let l1: f64 = bump.iter().map(|h| h.abs()).sum();
        assert!(first.abs() <= opts.grad_tol * l1);
    }
}

#[test]
fn euler_system_residual_examples() {
    let energy = PathFunctional::new(Arc::new(|_: f64, _: &[f64], v: &[f64]| v[0] * v[0] + v[1] * v[1]), 0.0, 1.0, vec![0.0; 2], vec![1.0; 2])
        .unwrap();
    let grid: Vec<f64> = (1..10).map(|k| k as f64 / 10.0).collect();
    let line = FnPath::new(2, Arc::new(|t| vec![[t, 1.0, 0.0], [2.0 * t, 2.0, 0.0]]));
    assert!(euler_system_residual(&energy, &line, &grid).unwrap() <= 1e-9);
    let parabola = FnPath::new(2, Arc::new(|t| vec![[t * t, 2.0 * t, 2.0], [t, 1.0, 0.0]]));
    assert!(euler_system_residual(&energy, &parabola, &grid).unwrap() > 1.0);

    // a great circle on the unit sphere, projected: P(t) = cos(wt) A + sin(wt) C
    let a = [0.6f64, 0.0, 0.8];
    let c = [0.0f64, 0.6, 0.8];
    let c = {
        let dot: f64 = a.iter().zip(&c).map(|(x, y)| x * y).sum();
        let raw: Vec<f64> = c.iter().zip(&a).map(|(c, a)| c - dot * a).collect();
        let len = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        [raw[0] / len, raw[1] / len, raw[2] / len]
    };
    let w = 0.9;
    let circle = FnPath::new(
        2,
        Arc::new(move |t: f64| {
            let (s, co) = ((w * t).sin(), (w * t).cos());
            (0..2).map(|i| [co * a[i] + s * c[i], w * (-s * a[i] + co * c[i]), -w * w * (co * a[i] + s * c[i])]).collect()
        }),
    );
    let end = |t: f64| [(w * t).cos() * a[0] + (w * t).sin() * c[0], (w * t).cos() * a[1] + (w * t).sin() * c[1]];
    let hemisphere = SurfaceJet::hemisphere(1.0);
    let arc = geodesic_functional(&hemisphere, end(0.0), end(1.0)).unwrap();
    assert!(euler_system_residual(&arc, &circle, &grid).unwrap() <= 1e-6);
    let energy = geodesic_energy(&hemisphere, end(0.0), end(1.0)).unwrap();
    assert!(euler_system_residual(&energy, &circle, &grid).unwrap() <= 1e-6);
}

#[test]
fn fundamental_lemma_on_minimizer_residuals() {
    assert!(fundamental_lemma_probe(&|_| 0.0, 0.0, 1.0, 20).unwrap().max_abs <= 1e-14);
    let r = fundamental_lemma_probe(&|_| 1.0, 0.25, 0.75, 1).unwrap();
    assert!(r.max_abs > 0.0);

    // discrete Euler-Lagrange residual grad_k / h of a converged minimizer,
    // interpolated linearly between nodes
    let f = dirichlet(1.0, 0.0, 1.0, vec![0.0], vec![0.0]).unwrap();
    let obj = discretize(&f, 50).unwrap();
    let opts = MinimizeOptions::default();
    let m = minimize(&obj, &perturbed(&f, 50, 0.1, 0.9), &opts).unwrap();
    let g = obj.gradient(&m.path);
    let h = obj.h();
    let phi = move |t: f64| {
        let s = (t / h).clamp(0.0, 49.999_999);
        let k = s.floor() as usize;
        let w = s - k as f64;
        ((1.0 - w) * g[k] + w * g[k + 1]) / h
    };
    let probe = fundamental_lemma_probe(&phi, 0.0, 1.0, 10).unwrap();
    assert!(probe.max_normalized <= opts.grad_tol / h, "{probe:?}");
}

fn config(v: serde_json::Value) -> ProblemConfig {
    serde_json::from_value(v).unwrap()
}

#[test]
fn geodesics_on_planes_and_hemisphere() {
    for slope in [0.0, 1.0] {
        let f = geodesic_energy(&SurfaceJet::plane(slope, 0.0, 0.0), [-0.6, -0.3], [0.5, 0.4]).unwrap();
        let obj = discretize(&f, 50).unwrap();
        let r = minimize(&obj, &perturbed(&f, 50, 0.05, 0.8), &MinimizeOptions::default()).unwrap();
        let dev = (0..=50)
            .map(|k| {
                let t = r.path.t(k);
                let node = r.path.node(k);
                (node[0] - (-0.6 + 1.1 * t)).abs().max((node[1] - (-0.3 + 0.7 * t)).abs())
            })
            .fold(0.0, f64::max);
        assert!(dev <= 1e-6, "slope {slope}: {dev}");
    }
    let s = run_problem(&config(json!({"functional": "geodesic", "params": {"surface": "hemisphere", "radius": 1.0}, "N": 200,
        "endpoints": {"t0": 0.0, "t1": 1.0, "a": [-0.6, -0.3], "b": [0.5, 0.4]}})))
    .unwrap()
    .1;
    assert!(s.converged && s.oracle_deviation <= 1e-3, "{s:?}");
}

#[test]
fn brachistochrone_matches_shooting_and_residual_decays() {
    let mut residuals = Vec::new();
    for n in [25usize, 50, 100] {
        let (result, s) = run_problem(&config(json!({"functional": "brachistochrone", "params": {"eps_start": 1e-3}, "N": n,
            "endpoints": {"t0": 0.0, "t1": 1.0, "a": [0.0], "b": [1.0]}})))
        .unwrap();
        assert!(s.converged);
        if n == 100 {
            assert!(s.oracle_deviation <= 1e-3, "{s:?}");
        }
        // recompute the summary residual from the returned path
        let f = eulerkit::variational::brachistochrone_depth(0.0, 1.0, 1e-3, 1.0).unwrap();
        let span = 1.0 - 1e-3;
        let grid: Vec<f64> =
            result.path.times().into_iter().filter(|&t| t >= 1e-3 + 0.2 * span && t <= 1e-3 + 0.8 * span).collect();
        assert_eq!(euler_system_residual(&f, &SplinePath::new(&result.path), &grid).unwrap(), s.el_residual);
        residuals.push(s.el_residual);
    }
    let ln_n = [25f64.ln(), 50f64.ln(), 100f64.ln()];
    let ln_r: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
    let (mx, my) = (ln_n.iter().sum::<f64>() / 3.0, ln_r.iter().sum::<f64>() / 3.0);
    let slope = ln_n.iter().zip(&ln_r).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / ln_n.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
    assert!(-slope >= 1.5, "exponent {} from {residuals:?}", -slope);
}

#[test]
fn minimization_is_bit_reproducible() {
    let cfg = config(json!({"functional": "geodesic", "params": {"surface": "hemisphere"}, "N": 40,
        "endpoints": {"t0": 0.0, "t1": 1.0, "a": [0.1, -0.5], "b": [-0.4, 0.6]}}));
    let (a, _) = run_problem(&cfg).unwrap();
    let (b, _) = run_problem(&cfg).unwrap();
    let bits = |p: &DiscretePath| p.ordinates.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a.path), bits(&b.path));
    assert_eq!(a.history.len(), b.history.len());
    let _ = PI;
}
