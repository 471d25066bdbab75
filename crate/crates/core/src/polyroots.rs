//! Complex roots of real polynomials, grouped into roots with multiplicity.
//!
//! All roots are found at once with the Aberth–Ehrlich iteration on the monic
//! polynomial. Nearby raw roots are then grouped, each group centre is polished
//! with Newton's method on the `(m-1)`-th derivative (which has a simple root
//! where the polynomial has an `m`-fold one), and the result is made exactly
//! closed under complex conjugation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Residual tolerance used by [`find_roots`] callers that have no better idea.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

const MAX_ABERTH_ITER: usize = 800;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("the zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("polynomial coefficients must be finite")]
    NonFinite,
    #[error("degree-0 polynomial has no roots")]
    Constant,
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("no roots supplied")]
    Empty,
    #[error("root finder did not converge after {iterations} iterations (worst residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64, best: Vec<Complex64> },
}

/// Real polynomial with ascending coefficients: `coeffs[k]` multiplies `r^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    /// Trailing (highest-degree) zeros are dropped.
    pub fn new(mut coeffs: Vec<f64>) -> Result<Self, PolyError> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(PolyError::NonFinite);
        }
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[self.degree()]
    }

    /// Copy divided by the leading coefficient.
    pub fn monic(&self) -> Self {
        let lead = self.leading();
        Self { coeffs: self.coeffs.iter().map(|c| c / lead).collect() }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `sum |a_k| |z|^k`, the natural scale for backward-error tests.
    pub fn magnitude_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c.abs())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self { coeffs: vec![0.0] };
        }
        Self { coeffs: self.coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect() }
    }

    fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }
}

/// A root together with how many times it occurs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootCluster {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Output of [`cluster_multiplicities`].
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub clusters: Vec<RootCluster>,
    /// Set when the grouping at this tolerance was not unique; the
    /// lexicographically smallest member then seeds each group.
    pub ambiguous: bool,
}

/// Expands `prod (r - value)^multiplicity` into ascending complex coefficients.
pub fn expand_roots(clusters: &[RootCluster]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for c in clusters {
        for _ in 0..c.multiplicity {
            let mut next = vec![Complex64::new(0.0, 0.0); out.len() + 1];
            for (k, &a) in out.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * c.value;
            }
            out = next;
        }
    }
    out
}

fn lex_cmp(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn mean(points: &[Complex64]) -> Complex64 {
    points.iter().sum::<Complex64>() / points.len() as f64
}

/// Default grouping radius for a set of raw roots.
pub fn default_cluster_tol(raw: &[Complex64]) -> f64 {
    let rmax = raw.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    1e-7 * rmax.max(1.0)
}

/// Groups raw roots whose members lie within `cluster_tol` of their mean.
///
/// Grouping is single-linkage at `cluster_tol`. Components that are too wide
/// to satisfy the mean condition are split greedily, seeded by the
/// lexicographically smallest remaining point, and flagged as ambiguous.
pub fn cluster_multiplicities(raw_roots: &[Complex64], cluster_tol: f64) -> Result<Clustering, PolyError> {
    if raw_roots.is_empty() {
        return Err(PolyError::Empty);
    }
    if !(cluster_tol > 0.0) {
        return Err(PolyError::InvalidTolerance(cluster_tol));
    }
    let mut pts = raw_roots.to_vec();
    pts.sort_by(lex_cmp);
    let n = pts.len();

    // union-find over the tolerance graph
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (pts[i] - pts[j]).norm() <= cluster_tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut components: Vec<Vec<Complex64>> = Vec::new();
    let mut root_index: Vec<Option<usize>> = vec![None; n];
    for (i, &p) in pts.iter().enumerate().take(n) {
        let r = find(&mut parent, i);
        let slot = match root_index[r] {
            Some(s) => s,
            None => {
                components.push(Vec::new());
                root_index[r] = Some(components.len() - 1);
                components.len() - 1
            }
        };
        components[slot].push(p);
    }

    let mut ambiguous = false;
    let mut clusters = Vec::new();
    for comp in components {
        let m = mean(&comp);
        if comp.iter().all(|p| (p - m).norm() <= cluster_tol) {
            clusters.push(RootCluster { value: m, multiplicity: comp.len() });
            continue;
        }
        ambiguous = true;
        let mut rest = comp;
        while !rest.is_empty() {
            let seed = rest[0];
            let (group, others): (Vec<_>, Vec<_>) = rest.into_iter().partition(|p| (p - seed).norm() <= cluster_tol);
            clusters.push(RootCluster { value: mean(&group), multiplicity: group.len() });
            rest = others;
        }
    }
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            if (clusters[i].value - clusters[j].value).norm() <= cluster_tol {
                ambiguous = true;
            }
        }
    }
    clusters.sort_by(|a, b| lex_cmp(&a.value, &b.value));
    Ok(Clustering { clusters, ambiguous })
}

/// Raw roots of `poly` by the Aberth–Ehrlich iteration (Gauss–Seidel sweep).
pub fn aberth_roots(poly: &RealPolynomial) -> Result<Vec<Complex64>, PolyError> {
    let p = poly.monic();
    let n = p.degree();
    if n == 0 {
        return Err(PolyError::Constant);
    }
    let c = p.coeffs();
    if n == 1 {
        return Ok(vec![Complex64::new(-c[0], 0.0)]);
    }
    let dp = p.derivative();

    // Fujiwara-style bound on the root moduli.
    let radius = (1..=n).map(|k| c[n - k].abs().powf(1.0 / k as f64)).fold(0.0f64, f64::max).max(1e-3);
    let centre = -c[n - 1] / n as f64;
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64 + 0.4;
            Complex64::new(centre, 0.0) + Complex64::from_polar(radius, theta)
        })
        .collect();

    let backward_ok = |z: Complex64| p.eval_complex(z).norm() <= 8.0 * f64::EPSILON * p.magnitude_scale(z);

    for _ in 0..MAX_ABERTH_ITER {
        let mut done = true;
        for j in 0..n {
            let pz = p.eval_complex(z[j]);
            if pz.norm() == 0.0 {
                continue;
            }
            let dz = dp.eval_complex(z[j]);
            let ratio = pz / dz;
            let repulsion: Complex64 = (0..n).filter(|&k| k != j).map(|k| 1.0 / (z[j] - z[k])).sum();
            let step = if dz.norm() == 0.0 || !ratio.is_finite() {
                // stationary point of p: nudge off it
                Complex64::new(1e-3, 1e-3) * radius
            } else {
                ratio / (1.0 - ratio * repulsion)
            };
            if step.is_finite() {
                z[j] -= step;
            }
            if step.norm() > 4.0 * f64::EPSILON * z[j].norm().max(1e-300) && !backward_ok(z[j]) {
                done = false;
            }
        }
        if done {
            return Ok(z);
        }
    }
    let residual = z.iter().map(|&r| p.eval_complex(r).norm() / p.magnitude_scale(r)).fold(0.0, f64::max);
    Err(PolyError::NonConvergence { iterations: MAX_ABERTH_ITER, residual, best: z })
}

/// Newton on the `(m-1)`-th derivative, accepted only while it does not wander
/// further than `radius` from the starting centre.
fn polish(p: &RealPolynomial, start: Complex64, m: usize, radius: f64) -> Complex64 {
    let g = p.nth_derivative(m - 1);
    let dg = g.derivative();
    let mut z = start;
    let mut gz = g.eval_complex(z).norm();
    for _ in 0..30 {
        let d = dg.eval_complex(z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - g.eval_complex(z) / d;
        let gn = g.eval_complex(next).norm();
        if !next.is_finite() || (next - start).norm() > radius || gn >= gz {
            break;
        }
        z = next;
        gz = gn;
    }
    z
}

/// Backward-error test that `z` is an `m`-fold root: every Taylor coefficient
/// below order `m` is small relative to its own magnitude scale.
fn is_multiple_root(p: &RealPolynomial, z: Complex64, m: usize, theta: f64) -> bool {
    let mut d = p.clone();
    for _ in 0..m {
        if d.eval_complex(z).norm() > theta * d.magnitude_scale(z) {
            return false;
        }
        d = d.derivative();
    }
    true
}

/// All roots of `poly` with multiplicities.
///
/// Every returned value satisfies `|poly(r)| <= tol * sum |a_k||r|^k` on the
/// monic polynomial, multiplicities sum to the degree, and the cluster set is
/// closed under conjugation.
pub fn find_roots(poly: &RealPolynomial, tol: f64) -> Result<Vec<RootCluster>, PolyError> {
    if !(tol > 0.0) {
        return Err(PolyError::InvalidTolerance(tol));
    }
    let n = poly.degree();
    if n == 0 {
        return Err(PolyError::Constant);
    }
    let p = poly.monic();
    if n == 1 {
        return Ok(vec![RootCluster { value: Complex64::new(-p.coeffs()[0], 0.0), multiplicity: 1 }]);
    }

    let raw = aberth_roots(&p)?;
    let scale = raw.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    let fine_tol = default_cluster_tol(&raw);
    let merge_radius = 1e-2 * scale;

    let initial = cluster_multiplicities(&raw, fine_tol)?;
    // Keep raw members per group so that merged centres are true means.
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for c in &initial.clusters {
        let members: Vec<Complex64> = raw.iter().copied().filter(|z| (z - c.value).norm() <= fine_tol).collect();
        groups.push(if members.len() == c.multiplicity { members } else { vec![c.value; c.multiplicity] });
    }

    // Merge neighbouring groups when the merged centre passes the
    // multiple-root test; double precision places the k copies of a k-fold
    // root about eps^(1/k) apart, well outside the fine radius for k >= 3.
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                let d = (mean(&groups[i]) - mean(&groups[j])).norm();
                if d <= merge_radius && best.is_none_or(|(_, _, bd)| d < bd) {
                    let mut merged = groups[i].clone();
                    merged.extend_from_slice(&groups[j]);
                    let m = merged.len();
                    let centre = polish(&p, mean(&merged), m, merge_radius);
                    if is_multiple_root(&p, centre, m, 1e-10) {
                        best = Some((i, j, d));
                    }
                }
            }
        }
        match best {
            Some((i, j, _)) => {
                let g = groups.remove(j);
                groups[i].extend(g);
            }
            None => break,
        }
    }

    let mut clusters: Vec<RootCluster> = groups
        .iter()
        .map(|g| {
            let m = g.len();
            let centre = mean(g);
            let spread = g.iter().map(|z| (z - centre).norm()).fold(fine_tol, f64::max);
            RootCluster { value: polish(&p, centre, m, 10.0 * spread), multiplicity: m }
        })
        .collect();

    enforce_conjugate_symmetry(&mut clusters, fine_tol, merge_radius);
    clusters.sort_by(|a, b| lex_cmp(&a.value, &b.value));

    let total: usize = clusters.iter().map(|c| c.multiplicity).sum();
    let worst = clusters
        .iter()
        .map(|c| p.eval_complex(c.value).norm() / p.magnitude_scale(c.value))
        .fold(0.0, f64::max);
    if total != n || !(worst <= tol) {
        return Err(PolyError::NonConvergence { iterations: MAX_ABERTH_ITER, residual: worst, best: raw });
    }
    Ok(clusters)
}

fn enforce_conjugate_symmetry(clusters: &mut [RootCluster], real_tol: f64, pair_tol: f64) {
    let n = clusters.len();
    let mut done = vec![false; n];
    for i in 0..n {
        if done[i] {
            continue;
        }
        let c = clusters[i];
        if c.value.im.abs() <= real_tol {
            clusters[i].value.im = 0.0;
            done[i] = true;
            continue;
        }
        let partner = (0..n)
            .filter(|&j| j != i && !done[j] && clusters[j].multiplicity == c.multiplicity)
            .map(|j| (j, (clusters[j].value - c.value.conj()).norm()))
            .filter(|&(_, d)| d <= pair_tol)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match partner {
            Some((j, _)) => {
                let upper = if c.value.im > 0.0 { c.value } else { clusters[j].value };
                let other = if c.value.im > 0.0 { clusters[j].value } else { c.value };
                let avg = 0.5 * (upper + other.conj());
                clusters[i].value = if c.value.im > 0.0 { avg } else { avg.conj() };
                clusters[j].value = clusters[i].value.conj();
                done[i] = true;
                done[j] = true;
            }
            None => {
                // An unpaired cluster of a real polynomial can only be real.
                clusters[i].value.im = 0.0;
                done[i] = true;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(coeffs: &[f64]) -> RealPolynomial {
        RealPolynomial::new(coeffs.to_vec()).unwrap()
    }

    #[test]
    fn construction_rules() {
        assert_eq!(RealPolynomial::new(vec![0.0, 0.0]), Err(PolyError::ZeroPolynomial));
        assert_eq!(RealPolynomial::new(vec![1.0, f64::NAN]), Err(PolyError::NonFinite));
        assert_eq!(poly(&[1.0, 2.0, 0.0, 0.0]).degree(), 1);
        assert_eq!(find_roots(&poly(&[3.0]), 1e-10), Err(PolyError::Constant));
        assert_eq!(find_roots(&poly(&[1.0, 1.0]), 0.0), Err(PolyError::InvalidTolerance(0.0)));
    }

    #[test]
    fn linear_closed_form() {
        let roots = find_roots(&poly(&[-6.0, 2.0]), 1e-12).unwrap();
        assert_eq!(roots, vec![RootCluster { value: c(3.0, 0.0), multiplicity: 1 }]);
    }

    #[test]
    fn unit_imaginary_pair() {
        let roots = find_roots(&poly(&[1.0, 0.0, 1.0]), 1e-10).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].value - c(0.0, -1.0)).norm() < 1e-14);
        assert!((roots[1].value - c(0.0, 1.0)).norm() < 1e-14);
        assert_eq!(roots[0].value, roots[1].value.conj());
    }

    #[test]
    fn perfect_cube() {
        let roots = find_roots(&poly(&[-1.0, 3.0, -3.0, 1.0]), 1e-10).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].multiplicity, 3);
        assert!((roots[0].value - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn beam_quartic_roots() {
        // r^4 - 1/K^4 with K = 1
        let roots = find_roots(&poly(&[-1.0, 0.0, 0.0, 0.0, 1.0]), 1e-10).unwrap();
        let expected = [c(-1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(1.0, 0.0)];
        assert_eq!(roots.len(), 4);
        for (r, e) in roots.iter().zip(expected) {
            assert_eq!(r.multiplicity, 1);
            assert!((r.value - e).norm() < 1e-13, "{r:?} vs {e}");
            assert!(poly(&[-1.0, 0.0, 0.0, 0.0, 1.0]).eval_complex(r.value).norm() < 1e-13);
        }
    }

    #[test]
    fn clustering_examples() {
        let one = cluster_multiplicities(&[c(1.0, 0.0), c(1.0, 1e-12)], 1e-9).unwrap();
        assert_eq!(one.clusters.len(), 1);
        assert_eq!(one.clusters[0].multiplicity, 2);
        assert!(!one.ambiguous);

        let two = cluster_multiplicities(&[c(3.0, 0.0), c(2.0, 0.0)], 1e-9).unwrap();
        assert_eq!(two.clusters, vec![
            RootCluster { value: c(2.0, 0.0), multiplicity: 1 },
            RootCluster { value: c(3.0, 0.0), multiplicity: 1 },
        ]);

        // Raw output for the perfect cube sits about eps^(1/3) away from 1;
        // grouping at that scale recovers the single triple root.
        let raw = aberth_roots(&poly(&[-1.0, 3.0, -3.0, 1.0])).unwrap();
        let grouped = cluster_multiplicities(&raw, 1e-3).unwrap();
        assert_eq!(grouped.clusters.len(), 1);
        assert_eq!(grouped.clusters[0].multiplicity, 3);
        assert!((grouped.clusters[0].value - c(1.0, 0.0)).norm() < 1e-4);
    }

    #[test]
    fn chained_points_are_ambiguous() {
        let pts = [c(1.8, 0.0), c(0.6, 0.0), c(0.0, 0.0), c(1.2, 0.0)];
        let out = cluster_multiplicities(&pts, 0.7).unwrap();
        assert!(out.ambiguous);
        assert_eq!(out.clusters.iter().map(|c| c.multiplicity).sum::<usize>(), 4);
        // seeded by the lexicographically smallest point
        assert_eq!(out.clusters[0], RootCluster { value: c(0.3, 0.0), multiplicity: 2 });
        assert!((out.clusters[1].value - c(1.5, 0.0)).norm() < 1e-15);
        assert_eq!(cluster_multiplicities(&[], 1.0), Err(PolyError::Empty));
    }

    #[test]
    fn expansion_matches_known_polynomial() {
        let coeffs = expand_roots(&[RootCluster { value: c(1.0, 0.0), multiplicity: 3 }]);
        let expected = [-1.0, 3.0, -3.0, 1.0];
        for (a, e) in coeffs.iter().zip(expected) {
            assert!((a - c(e, 0.0)).norm() < 1e-15);
        }
    }
}
