use eulerkit::polyroots::{expand_roots, find_roots, RealPolynomial, RootCluster};
use num_complex::Complex64;
use proptest::prelude::*;

/// Roots with multiplicities and conjugate partners; total degree <= 6.
fn root_sets() -> impl Strategy<Value = Vec<RootCluster>> {
    let real = (-3.0f64..3.0, 1usize..=3).prop_map(|(re, m)| vec![RootCluster { value: Complex64::new(re, 0.0), multiplicity: m }]);
    let pair = (-2.0f64..2.0, 0.2f64..2.0, 1usize..=3).prop_map(|(re, im, m)| {
        vec![
            RootCluster { value: Complex64::new(re, im), multiplicity: m },
            RootCluster { value: Complex64::new(re, -im), multiplicity: m },
        ]
    });
    prop::collection::vec(prop_oneof![real, pair], 1..=4).prop_filter_map("degree <= 6, separated roots", |groups| {
        let roots: Vec<RootCluster> = groups.into_iter().flatten().collect();
        let degree: usize = roots.iter().map(|r| r.multiplicity).sum();
        let separated = roots
            .iter()
            .enumerate()
            .all(|(i, a)| roots.iter().skip(i + 1).all(|b| (a.value - b.value).norm() > 0.3));
        (degree <= 6 && separated).then_some(roots)
    })
}

fn real_poly(roots: &[RootCluster]) -> RealPolynomial {
    RealPolynomial::new(expand_roots(roots).iter().map(|c| c.re).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reconstruction_and_multiplicities(roots in root_sets()) {
        let poly = real_poly(&roots);
        let found = find_roots(&poly, 1e-10).unwrap();

        let total: usize = found.iter().map(|c| c.multiplicity).sum();
        prop_assert_eq!(total, poly.degree());

        let rebuilt = expand_roots(&found);
        let scale = poly.coeffs().iter().fold(1.0f64, |m, c| m.max(c.abs()));
        for (a, b) in rebuilt.iter().zip(poly.coeffs()) {
            prop_assert!((a - Complex64::new(*b, 0.0)).norm() <= 1e-8 * scale, "{:?} vs {:?}", rebuilt, poly.coeffs());
        }

        let mut expected: Vec<usize> = roots.iter().map(|r| r.multiplicity).collect();
        let mut got: Vec<usize> = found.iter().map(|r| r.multiplicity).collect();
        expected.sort();
        got.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn conjugate_closure(roots in root_sets()) {
        let found = find_roots(&real_poly(&roots), 1e-10).unwrap();
        for c in &found {
            let partner = found.iter().filter(|d| d.value == c.value.conj()).count();
            prop_assert_eq!(partner, 1);
            let mate = found.iter().find(|d| d.value == c.value.conj()).unwrap();
            prop_assert_eq!(mate.multiplicity, c.multiplicity);
        }
    }

    #[test]
    fn scaling_does_not_change_roots(roots in root_sets(), s in 0.1f64..100.0) {
        let poly = real_poly(&roots);
        let scaled = RealPolynomial::new(poly.coeffs().iter().map(|c| c * s).collect()).unwrap();
        let a = find_roots(&poly, 1e-10).unwrap();
        let b = find_roots(&scaled, 1e-10).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x.value - y.value).norm() < 1e-6);
        }
    }
}

#[test]
fn degree_ten_simple_roots() {
    let roots: Vec<RootCluster> = (1..=10)
        .map(|k| RootCluster { value: Complex64::new(k as f64 * 0.3 - 1.6, 0.0), multiplicity: 1 })
        .collect();
    let found = find_roots(&real_poly(&roots), 1e-10).unwrap();
    assert_eq!(found.len(), 10);
    for (f, r) in found.iter().zip(&roots) {
        assert!((f.value - r.value).norm() < 1e-8);
    }
}
