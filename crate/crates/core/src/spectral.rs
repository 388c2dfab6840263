//! Biorthogonal eigen-analysis.
//!
//! Right eigenvectors come from `H`, left eigenvectors from `H†` (never from
//! inverting the right-eigenvector matrix). The two sets are paired by
//! eigenvalue conjugation and normalized so that `⟨φ_k|ψ_k⟩ = 1` with unit
//! right vectors.

use num_complex::Complex64;
use thiserror::Error;

use crate::numkernel::{
    eig, null_space, solve, ComplexVector, DenseComplexMatrix, LinalgError,
    DEFAULT_DEGENERACY_TOL,
};

/// Eigenvector-matrix condition numbers above this flag the operator as defective.
pub const DEFECTIVE_CONDITION: f64 = 1e8;

/// Default tolerance for [`analyze`].
pub const DEFAULT_SPECTRAL_TOL: f64 = DEFAULT_DEGENERACY_TOL;

/// Default threshold on `|Im λ|` for [`spectrum_is_real`].
pub const REAL_SPECTRUM_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("eigenvalues of H and H† do not pair by conjugation (mismatch {mismatch:e})")]
    ConjugatePairing { mismatch: f64 },
    #[error("left and right eigenvectors of cluster at {eigenvalue} cannot be biorthonormalized")]
    Biorthonormalization { eigenvalue: Complex64 },
}

#[derive(Clone, Debug)]
pub struct SpectralData {
    /// Sorted by descending imaginary part, ties by ascending real part.
    pub eigenvalues: Vec<Complex64>,
    pub right_vectors: Vec<ComplexVector>,
    /// Right eigenvectors of `H†`. Paired index-by-index with `right_vectors`
    /// unless the operator is defective.
    pub left_vectors: Vec<ComplexVector>,
    pub defective: bool,
    pub eigvec_condition: f64,
}

impl SpectralData {
    /// `⟨φ_m|ψ_n⟩` for all pairs.
    pub fn overlap_matrix(&self) -> Vec<Vec<Complex64>> {
        self.left_vectors
            .iter()
            .map(|phi| self.right_vectors.iter().map(|psi| phi.dot(psi)).collect())
            .collect()
    }
}

/// Full eigen-analysis of `h`. `tol` is relative to `max(1, ‖h‖_F)` and
/// governs degeneracy, numerical rank and the conjugate-pairing check.
pub fn analyze(h: &DenseComplexMatrix, tol: f64) -> Result<SpectralData, SpectralError> {
    let n = h.dim();
    let scale = h.norm_fro().max(1.0);
    let hd = h.adjoint();

    let right = eig(h, tol)?;
    let order = sorted_order(&right.values, tol * scale);
    let eigenvalues: Vec<Complex64> = order.iter().map(|&k| right.values[k]).collect();
    let defective = !(right.condition <= DEFECTIVE_CONDITION);

    if defective {
        let mut right_vectors = Vec::new();
        let mut left_vectors = Vec::new();
        for cluster in crate::numkernel::eig_clusters(&eigenvalues, tol * scale) {
            let center = cluster.iter().map(|&k| eigenvalues[k]).sum::<Complex64>()
                / cluster.len() as f64;
            right_vectors.extend(null_space(&h.shift_diagonal(-center), tol * scale)?);
            left_vectors.extend(null_space(&hd.shift_diagonal(-center.conj()), tol * scale)?);
        }
        return Ok(SpectralData {
            eigenvalues,
            right_vectors,
            left_vectors,
            defective,
            eigvec_condition: right.condition,
        });
    }

    let right_vectors: Vec<ComplexVector> =
        order.iter().map(|&k| right.vectors[k].clone()).collect();
    let left = eig(&hd, tol)?;

    // greedy nearest-conjugate matching, ties broken by largest overlap
    let mut used = vec![false; n];
    let mut left_vectors = Vec::with_capacity(n);
    let mut mismatch: f64 = 0.0;
    for (lambda, psi) in eigenvalues.iter().zip(&right_vectors) {
        let dist = |j: usize| (left.values[j].conj() - lambda).norm();
        let best = (0..n).filter(|&j| !used[j]).map(dist).fold(f64::INFINITY, f64::min);
        let pick = (0..n)
            .filter(|&j| !used[j] && dist(j) <= best + tol * scale)
            .max_by(|&a, &b| {
                let oa = left.vectors[a].dot(psi).norm();
                let ob = left.vectors[b].dot(psi).norm();
                oa.total_cmp(&ob).then(b.cmp(&a))
            })
            .expect("one unused left eigenvector per right eigenvector");
        used[pick] = true;
        mismatch = mismatch.max(dist(pick));
        left_vectors.push(left.vectors[pick].clone());
    }
    if mismatch > tol * scale {
        return Err(SpectralError::ConjugatePairing { mismatch });
    }

    for cluster in crate::numkernel::eig_clusters(&eigenvalues, tol * scale) {
        biorthonormalize(&cluster, &right_vectors, &mut left_vectors)
            .ok_or(SpectralError::Biorthonormalization { eigenvalue: eigenvalues[cluster[0]] })?;
    }

    Ok(SpectralData {
        eigenvalues,
        right_vectors,
        left_vectors,
        defective,
        eigvec_condition: right.condition,
    })
}

/// Replaces the cluster's left block `Φ` by `Φ·M^{-†}` with `M = Φ†Ψ`, so the
/// block overlap becomes the identity.
fn biorthonormalize(
    cluster: &[usize],
    right: &[ComplexVector],
    left: &mut [ComplexVector],
) -> Option<()> {
    let m = cluster.len();
    if m == 1 {
        let k = cluster[0];
        let o = left[k].dot(&right[k]);
        if o.norm() == 0.0 {
            return None;
        }
        left[k] = left[k].scale(Complex64::new(1.0, 0.0) / o.conj());
        return Some(());
    }
    let rows: Vec<Vec<Complex64>> = cluster
        .iter()
        .map(|&a| cluster.iter().map(|&b| left[a].dot(&right[b])).collect())
        .collect();
    let overlap = DenseComplexMatrix::from_rows(&rows).ok()?;
    // Φ' = Φ·M^{-†}, i.e. column b of Φ' is Σ_a Φ_a (M^{-†})_{ab} and M^{-†} = (M†)^{-1}
    let inv_adj = solve(&overlap.adjoint(), &DenseComplexMatrix::identity(m)).ok()?;
    let old: Vec<ComplexVector> = cluster.iter().map(|&k| left[k].clone()).collect();
    for (b, &kb) in cluster.iter().enumerate() {
        let mut acc = ComplexVector::zeros(old[0].len());
        for (a, phi) in old.iter().enumerate() {
            acc = acc.axpy(inv_adj[(a, b)], phi);
        }
        left[kb] = acc;
    }
    Some(())
}

/// Indices sorting by descending `Im`, then ascending `Re` among values whose
/// imaginary parts agree within `tie_tol`.
fn sorted_order(values: &[Complex64], tie_tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].im.total_cmp(&values[a].im).then(a.cmp(&b)));
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && values[idx[end - 1]].im - values[idx[end]].im <= tie_tol {
            end += 1;
        }
        idx[start..end].sort_by(|&a, &b| values[a].re.total_cmp(&values[b].re).then(a.cmp(&b)));
        start = end;
    }
    idx
}

/// `max_k Im λ_k`: the asymptotic exponential rate of `‖e^{-iHt}ψ‖`.
pub fn max_growth_rate(sd: &SpectralData) -> f64 {
    // `+ 0.0` turns a -0.0 from exactly lossless spectra into 0.0
    sd.eigenvalues.iter().map(|l| l.im).fold(f64::NEG_INFINITY, f64::max) + 0.0
}

pub fn spectrum_is_real(sd: &SpectralData, tol: f64) -> bool {
    sd.eigenvalues.iter().all(|l| l.im.abs() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build, gauge_transform, is_normal, HamiltonianSpec, DEFAULT_CLASSIFY_TOL};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn chain(n: usize, t_l: f64, t_r: f64, gamma: f64, beta: f64) -> DenseComplexMatrix {
        build(&HamiltonianSpec::chain(n, t_l, t_r, gamma, beta)).unwrap()
    }

    fn assert_biorthonormal(sd: &SpectralData, tol: f64) {
        for (m, row) in sd.overlap_matrix().iter().enumerate() {
            for (k, o) in row.iter().enumerate() {
                let want = if m == k { 1.0 } else { 0.0 };
                assert!((o - want).norm() <= tol, "overlap[{m}][{k}] = {o}");
            }
        }
    }

    #[test]
    fn periodic_unidirectional_ring() {
        let sd = analyze(&chain(10, 1.0, 0.0, 0.0, 1.0), DEFAULT_SPECTRAL_TOL).unwrap();
        assert!(!sd.defective);
        assert_eq!(sd.eigenvalues.len(), 10);
        for l in &sd.eigenvalues {
            assert!((l.norm() - 1.0).abs() < 1e-12);
        }
        // descending imaginary part, real part ascending within ties
        assert!((sd.eigenvalues[0] - Complex64::from_polar(1.0, 0.6 * PI)).norm() < 1e-12);
        assert!((sd.eigenvalues[1] - Complex64::from_polar(1.0, 0.4 * PI)).norm() < 1e-12);
        for a in 0..10 {
            for b in a + 1..10 {
                assert!(sd.right_vectors[a].dot(&sd.right_vectors[b]).norm() < 1e-8);
            }
        }
        assert_biorthonormal(&sd, 1e-8);
    }

    #[test]
    fn open_unidirectional_chain_is_defective() {
        let sd = analyze(&chain(10, 1.0, 0.0, 0.0, 0.0), DEFAULT_SPECTRAL_TOL).unwrap();
        assert!(sd.defective);
        assert!(sd.eigenvalues.iter().all(|l| l.norm() == 0.0));
        assert_eq!(sd.right_vectors.len(), 1);
        assert_eq!(sd.left_vectors.len(), 1);
        assert!((sd.right_vectors[0][0].norm() - 1.0).abs() < 1e-14);
        assert!((sd.left_vectors[0][9].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn open_partially_directed_chain_cosine_band() {
        let sd = analyze(&chain(10, 1.0, 0.5, 0.0, 0.0), DEFAULT_SPECTRAL_TOL).unwrap();
        assert!(!sd.defective);
        let mut want: Vec<f64> =
            (1..=10).map(|k| 2.0 * 0.5f64.sqrt() * (k as f64 * PI / 11.0).cos()).collect();
        want.sort_by(f64::total_cmp);
        let mut got: Vec<f64> = sd.eigenvalues.iter().map(|l| l.re).collect();
        got.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
        assert!(spectrum_is_real(&sd, REAL_SPECTRUM_TOL));
        assert_biorthonormal(&sd, 1e-8);
    }

    #[test]
    fn growth_rates() {
        let herm = analyze(&chain(10, 1.0, 1.0, 0.0, 0.0), DEFAULT_SPECTRAL_TOL).unwrap();
        assert!(max_growth_rate(&herm).abs() < 1e-12);
        let ring = analyze(&chain(10, 1.0, 0.0, 0.0, 1.0), DEFAULT_SPECTRAL_TOL).unwrap();
        let s72 = (72.0f64).to_radians().sin();
        assert!((max_growth_rate(&ring) - s72).abs() < 1e-12);
        let lossy = analyze(&chain(10, 1.0, 0.0, 0.5, 1.0), DEFAULT_SPECTRAL_TOL).unwrap();
        assert!((max_growth_rate(&lossy) - (s72 - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn spectrum_reality() {
        let tol = REAL_SPECTRUM_TOL;
        let obc = analyze(&chain(10, 1.0, 0.0, 0.0, 0.0), DEFAULT_SPECTRAL_TOL).unwrap();
        assert!(spectrum_is_real(&obc, tol));
        let lossy = analyze(&chain(10, 1.0, 0.0, 0.5, 0.0), DEFAULT_SPECTRAL_TOL).unwrap();
        assert!(!spectrum_is_real(&lossy, tol));
        assert!(lossy.eigenvalues.iter().all(|l| (l.im + 0.5).abs() < 1e-12));
        let ring = analyze(&chain(10, 1.0, 0.0, 0.0, 1.0), DEFAULT_SPECTRAL_TOL).unwrap();
        assert!(!spectrum_is_real(&ring, tol));
    }

    #[test]
    fn degenerate_hermitian_ring_is_biorthonormal() {
        // cos(2πk/N) is doubly degenerate for the reciprocal ring
        let sd = analyze(&chain(8, 1.0, 1.0, 0.0, 1.0), DEFAULT_SPECTRAL_TOL).unwrap();
        assert!(!sd.defective);
        assert_biorthonormal(&sd, 1e-8);
        for a in 0..8 {
            for b in a + 1..8 {
                assert!(sd.right_vectors[a].dot(&sd.right_vectors[b]).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn exceptional_point_eigenvectors() {
        let h = build(&HamiltonianSpec::pt2(0.2)).unwrap();
        let sd = analyze(&h, DEFAULT_SPECTRAL_TOL).unwrap();
        assert!(sd.defective);
        for l in &sd.eigenvalues {
            assert!((l - Complex64::new(0.0, -0.2)).norm() < 1e-7);
        }
        assert_eq!(sd.right_vectors.len(), 1);
        assert_eq!(sd.left_vectors.len(), 1);
        // right ∝ (i, 1), left ∝ (-i, 1)
        let r = &sd.right_vectors[0];
        assert!((r[0] / r[1] - Complex64::i()).norm() < 1e-7);
        let l = &sd.left_vectors[0];
        assert!((l[0] / l[1] + Complex64::i()).norm() < 1e-7);
    }

    #[test]
    fn sort_groups_equal_imaginary_parts() {
        let v = [
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(0.5, -1.0),
        ];
        assert_eq!(sorted_order(&v, 1e-12), vec![2, 1, 0, 3]);
    }

    fn any_chain() -> impl Strategy<Value = HamiltonianSpec> {
        (3usize..11, 0.3f64..1.5, prop_oneof![Just(0.0), 0.3f64..1.5], 0.0f64..1.0, prop_oneof![Just(0.0), Just(1.0)])
            .prop_map(|(n, tl, tr, g, b)| HamiltonianSpec::chain(n, tl, tr, g, b))
    }

    fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
        let mut used = vec![false; b.len()];
        let mut worst: f64 = 0.0;
        for x in a {
            let (j, d) = b
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, y)| (j, (x - y).norm()))
                .min_by(|p, q| p.1.total_cmp(&q.1))
                .unwrap();
            used[j] = true;
            worst = worst.max(d);
        }
        worst
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn adjoint_spectrum_is_conjugate(spec in any_chain()) {
            let h = build(&spec).unwrap();
            let a = analyze(&h, DEFAULT_SPECTRAL_TOL).unwrap();
            let b = analyze(&h.adjoint(), DEFAULT_SPECTRAL_TOL).unwrap();
            let conj: Vec<Complex64> = b.eigenvalues.iter().map(|z| z.conj()).collect();
            prop_assert!(multiset_distance(&a.eigenvalues, &conj) <= 1e-9);
        }

        #[test]
        fn loss_shifts_spectrum(spec in any_chain(), extra in 0.0f64..1.0) {
            let h = build(&spec).unwrap();
            let shifted = h.shift_diagonal(Complex64::new(0.0, -extra));
            let a = analyze(&h, DEFAULT_SPECTRAL_TOL).unwrap();
            let b = analyze(&shifted, DEFAULT_SPECTRAL_TOL).unwrap();
            let moved: Vec<Complex64> =
                a.eigenvalues.iter().map(|z| z - Complex64::new(0.0, extra)).collect();
            prop_assert!(multiset_distance(&moved, &b.eigenvalues) <= 1e-9);
        }

        #[test]
        fn normal_implies_orthogonal(spec in any_chain()) {
            let h = build(&spec).unwrap();
            prop_assume!(is_normal(&h, DEFAULT_CLASSIFY_TOL));
            let sd = analyze(&h, DEFAULT_SPECTRAL_TOL).unwrap();
            for a in 0..sd.right_vectors.len() {
                for b in a + 1..sd.right_vectors.len() {
                    prop_assert!(sd.right_vectors[a].dot(&sd.right_vectors[b]).norm() <= 1e-8);
                }
            }
        }

        #[test]
        fn non_defective_pairs_are_biorthonormal(spec in any_chain()) {
            let h = build(&spec).unwrap();
            let sd = analyze(&h, DEFAULT_SPECTRAL_TOL).unwrap();
            prop_assume!(!sd.defective);
            for (m, row) in sd.overlap_matrix().iter().enumerate() {
                for (k, o) in row.iter().enumerate() {
                    let want = if m == k { 1.0 } else { 0.0 };
                    prop_assert!((o - want).norm() <= 1e-8);
                }
            }
        }

        #[test]
        fn gauge_preserves_spectrum(n in 2usize..11, tl in 0.2f64..1.5, tr in 0.2f64..1.5, g in 0.0f64..1.0) {
            let spec = HamiltonianSpec::chain(n, tl, tr, g, 0.0);
            let (_, h_sym) = gauge_transform(&spec).unwrap();
            let a = analyze(&build(&spec).unwrap(), DEFAULT_SPECTRAL_TOL).unwrap();
            let b = analyze(&h_sym, DEFAULT_SPECTRAL_TOL).unwrap();
            prop_assert!(multiset_distance(&a.eigenvalues, &b.eigenvalues) <= 1e-9);
        }
    }
}
