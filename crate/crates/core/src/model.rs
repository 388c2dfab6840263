//! Hamiltonian families and structural predicates.
//!
//! The chain family is the `N×N` tight-binding ring/segment with hopping `t_l`
//! on the superdiagonal, `t_r` on the subdiagonal, uniform on-site loss `-iγ`,
//! and corner couplings `(1,N) = β·t_r`, `(N,1) = β·t_l`. `β = 1` closes the
//! ring (periodic boundary), `β = 0` opens it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numkernel::{inverse, multiply, DenseComplexMatrix, LinalgError};

/// Default absolute tolerance for the classification predicates.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("chain requires n >= 2, got {0}")]
    ChainTooShort(usize),
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("gauge transform singular for unidirectional coupling")]
    UnidirectionalGauge,
    #[error("PBC not gauge-removable (beta = {0})")]
    PeriodicGauge(f64),
    #[error("gauge transform only applies to the chain family")]
    NotAChain,
    #[error("eta is singular: {0}")]
    SingularEta(LinalgError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `N×N` nonreciprocal chain.
    Chain,
    /// `[[0, 1], [0, 0]]`
    Jordan2,
    /// `[[-iγ, 1], [0, -iγ]]`
    Jordan2Loss,
    /// Passive PT-symmetric dimer `[[ig - iγ₀, c], [c, -ig - iγ₀]]`.
    Pt2,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Chain => "chain",
            Family::Jordan2 => "jordan2",
            Family::Jordan2Loss => "jordan2-loss",
            Family::Pt2 => "pt2",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chain" => Ok(Family::Chain),
            "jordan2" => Ok(Family::Jordan2),
            "jordan2-loss" => Ok(Family::Jordan2Loss),
            "pt2" => Ok(Family::Pt2),
            other => Err(format!("unknown model family `{other}`")),
        }
    }
}

/// Declarative description of a model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HamiltonianSpec {
    pub family: Family,
    /// Number of sites (chain only).
    pub n: usize,
    /// Hopping on the superdiagonal.
    pub t_l: f64,
    /// Hopping on the subdiagonal.
    pub t_r: f64,
    /// Uniform net loss.
    pub gamma: f64,
    /// Boundary parameter: 1 periodic, 0 open.
    pub beta: f64,
    /// Net loss of the PT dimer.
    pub gamma0: f64,
    /// Gain/loss contrast of the PT dimer.
    pub g: f64,
    /// Coupling of the PT dimer.
    pub c: f64,
}

impl Default for HamiltonianSpec {
    fn default() -> Self {
        Self {
            family: Family::Chain,
            n: 10,
            t_l: 1.0,
            t_r: 0.0,
            gamma: 0.0,
            beta: 1.0,
            gamma0: 0.0,
            g: 1.0,
            c: 1.0,
        }
    }
}

impl HamiltonianSpec {
    pub fn chain(n: usize, t_l: f64, t_r: f64, gamma: f64, beta: f64) -> Self {
        Self { family: Family::Chain, n, t_l, t_r, gamma, beta, ..Self::default() }
    }

    pub fn jordan2() -> Self {
        Self { family: Family::Jordan2, n: 2, ..Self::default() }
    }

    pub fn jordan2_loss(gamma: f64) -> Self {
        Self { family: Family::Jordan2Loss, n: 2, gamma, ..Self::default() }
    }

    /// PT dimer with `g = c = 1`.
    pub fn pt2(gamma0: f64) -> Self {
        Self { family: Family::Pt2, n: 2, gamma0, ..Self::default() }
    }

    /// Matrix dimension produced by [`build`].
    pub fn dim(&self) -> usize {
        match self.family {
            Family::Chain => self.n,
            _ => 2,
        }
    }

    pub fn is_periodic(&self) -> bool {
        self.family == Family::Chain && self.beta == 1.0
    }

    pub fn is_open(&self) -> bool {
        self.family == Family::Chain && self.beta == 0.0
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let finite = [
            ("t_l", self.t_l),
            ("t_r", self.t_r),
            ("gamma", self.gamma),
            ("beta", self.beta),
            ("gamma0", self.gamma0),
            ("g", self.g),
            ("c", self.c),
        ];
        for (field, value) in finite {
            if !value.is_finite() {
                return Err(ModelError::InvalidParameter { field, reason: "must be finite".into() });
            }
        }
        if self.gamma < 0.0 {
            return Err(ModelError::InvalidParameter { field: "gamma", reason: "must be >= 0".into() });
        }
        if self.gamma0 < 0.0 {
            return Err(ModelError::InvalidParameter { field: "gamma0", reason: "must be >= 0".into() });
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(ModelError::InvalidParameter { field: "beta", reason: "must lie in [0, 1]".into() });
        }
        if self.family == Family::Chain && self.n < 2 {
            return Err(ModelError::ChainTooShort(self.n));
        }
        Ok(())
    }
}

/// Builds the matrix described by `spec`.
pub fn build(spec: &HamiltonianSpec) -> Result<DenseComplexMatrix, ModelError> {
    spec.validate()?;
    let re = |x: f64| Complex64::new(x, 0.0);
    let loss = Complex64::new(0.0, -spec.gamma);
    match spec.family {
        Family::Chain => {
            let n = spec.n;
            let mut h = DenseComplexMatrix::zeros(n);
            for j in 0..n {
                h[(j, j)] = loss;
            }
            for j in 0..n - 1 {
                h[(j, j + 1)] += re(spec.t_l);
                h[(j + 1, j)] += re(spec.t_r);
            }
            // for n = 2 the corners coincide with the off-diagonals and add up
            h[(0, n - 1)] += re(spec.beta * spec.t_r);
            h[(n - 1, 0)] += re(spec.beta * spec.t_l);
            Ok(h)
        }
        Family::Jordan2 => Ok(DenseComplexMatrix::from_real_rows(&[
            vec![0.0, 1.0],
            vec![0.0, 0.0],
        ])?),
        Family::Jordan2Loss => Ok(DenseComplexMatrix::from_rows(&[
            vec![loss, re(1.0)],
            vec![re(0.0), loss],
        ])?),
        Family::Pt2 => {
            let i = Complex64::i();
            Ok(DenseComplexMatrix::from_rows(&[
                vec![i * spec.g - i * spec.gamma0, re(spec.c)],
                vec![re(spec.c), -i * spec.g - i * spec.gamma0],
            ])?)
        }
    }
}

/// `‖h − h†‖_max ≤ tol`
pub fn is_hermitian(h: &DenseComplexMatrix, tol: f64) -> bool {
    h.approx_eq(&h.adjoint(), tol)
}

/// `‖h·h† − h†·h‖_max ≤ tol`
pub fn is_normal(h: &DenseComplexMatrix, tol: f64) -> bool {
    let hd = h.adjoint();
    let a = multiply(h, &hd).expect("square");
    let b = multiply(&hd, h).expect("square");
    a.approx_eq(&b, tol)
}

/// `‖η·h·η⁻¹ − h†‖_max ≤ tol`. Says nothing about whether the spectrum is real.
pub fn check_pseudo_hermitian(
    h: &DenseComplexMatrix,
    eta: &DenseComplexMatrix,
    tol: f64,
) -> Result<bool, ModelError> {
    if h.dim() != eta.dim() {
        return Err(LinalgError::DimensionMismatch { left: h.dim(), right: eta.dim() }.into());
    }
    let eta_inv = inverse(eta).map_err(ModelError::SingularEta)?;
    let conj = multiply(&multiply(eta, h)?, &eta_inv)?;
    Ok(conj.approx_eq(&h.adjoint(), tol))
}

/// Imaginary gauge transform of an open chain.
///
/// Returns `(s, h_sym)` with `s = diag(r, r², …, r^N)`, `r = √(t_l/t_r)` and
/// `h_sym = s·H·s⁻¹`, whose hoppings are `√(t_l·t_r)` in both directions.
/// The on-site terms are untouched, so any loss carries over unchanged.
pub fn gauge_transform(
    spec: &HamiltonianSpec,
) -> Result<(DenseComplexMatrix, DenseComplexMatrix), ModelError> {
    if spec.family != Family::Chain {
        return Err(ModelError::NotAChain);
    }
    spec.validate()?;
    if spec.beta != 0.0 {
        return Err(ModelError::PeriodicGauge(spec.beta));
    }
    if spec.t_l == 0.0 || spec.t_r == 0.0 {
        return Err(ModelError::UnidirectionalGauge);
    }
    if spec.t_l < 0.0 || spec.t_r < 0.0 {
        return Err(ModelError::InvalidParameter {
            field: "t_l/t_r",
            reason: "gauge transform needs positive hoppings".into(),
        });
    }
    let h = build(spec)?;
    let r = (spec.t_l / spec.t_r).sqrt();
    let diag: Vec<Complex64> =
        (1..=spec.n).map(|j| Complex64::new(r.powi(j as i32), 0.0)).collect();
    let inv_diag: Vec<Complex64> = diag.iter().map(|d| d.inv()).collect();
    let s = DenseComplexMatrix::from_diag(&diag);
    let s_inv = DenseComplexMatrix::from_diag(&inv_diag);
    let h_sym = multiply(&multiply(&s, &h)?, &s_inv)?;
    Ok((s, h_sym))
}

/// The metric `η = S†S` certifying pseudo-Hermiticity of a lossless open chain.
pub fn gauge_metric(spec: &HamiltonianSpec) -> Result<DenseComplexMatrix, ModelError> {
    let (s, _) = gauge_transform(spec)?;
    Ok(multiply(&s.adjoint(), &s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn periodic_unidirectional_three_site() {
        let h = build(&HamiltonianSpec::chain(3, 1.0, 0.0, 0.0, 1.0)).unwrap();
        let want = DenseComplexMatrix::from_real_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!(h.approx_eq(&want, 0.0));
    }

    #[test]
    fn open_unidirectional_three_site() {
        let h = build(&HamiltonianSpec::chain(3, 1.0, 0.0, 0.0, 0.0)).unwrap();
        let want = DenseComplexMatrix::from_real_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!(h.approx_eq(&want, 0.0));
    }

    #[test]
    fn jordan_with_loss() {
        let h = build(&HamiltonianSpec::jordan2_loss(0.5)).unwrap();
        let want = DenseComplexMatrix::from_rows(&[
            vec![c(0.0, -0.5), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, -0.5)],
        ])
        .unwrap();
        assert!(h.approx_eq(&want, 0.0));
    }

    #[test]
    fn pt_dimer_layout() {
        let h = build(&HamiltonianSpec::pt2(0.2)).unwrap();
        assert!((h[(0, 0)] - c(0.0, 0.8)).norm() < 1e-15);
        assert!((h[(1, 1)] - c(0.0, -1.2)).norm() < 1e-15);
        assert_eq!(h[(0, 1)], c(1.0, 0.0));
        assert_eq!(h[(1, 0)], c(1.0, 0.0));
    }

    #[test]
    fn corner_entries_follow_beta() {
        let h = build(&HamiltonianSpec::chain(5, 1.0, 0.5, 0.3, 0.25)).unwrap();
        assert_eq!(h[(0, 4)], c(0.125, 0.0));
        assert_eq!(h[(4, 0)], c(0.25, 0.0));
        assert_eq!(h[(2, 2)], c(0.0, -0.3));
    }

    #[test]
    fn short_chain_rejected() {
        assert_eq!(
            build(&HamiltonianSpec::chain(1, 1.0, 0.0, 0.0, 1.0)).unwrap_err(),
            ModelError::ChainTooShort(1)
        );
    }

    #[test]
    fn hermitian_examples() {
        let tol = DEFAULT_CLASSIFY_TOL;
        assert!(is_hermitian(&build(&HamiltonianSpec::chain(10, 1.0, 1.0, 0.0, 0.0)).unwrap(), tol));
        assert!(!is_hermitian(&build(&HamiltonianSpec::chain(10, 1.0, 0.0, 0.0, 0.0)).unwrap(), tol));
        assert!(!is_hermitian(&build(&HamiltonianSpec::chain(10, 1.0, 1.0, 0.5, 0.0)).unwrap(), tol));
    }

    #[test]
    fn normality_examples() {
        let tol = DEFAULT_CLASSIFY_TOL;
        assert!(is_normal(&build(&HamiltonianSpec::chain(10, 1.0, 0.0, 0.0, 1.0)).unwrap(), tol));
        let obc = build(&HamiltonianSpec::chain(10, 1.0, 0.0, 0.0, 0.0)).unwrap();
        assert!(!is_normal(&obc, tol));
        // commutator of the open shift is diag(1, 0, …, 0, -1)
        let hd = obc.adjoint();
        let comm = multiply(&obc, &hd).unwrap().sub(&multiply(&hd, &obc).unwrap()).unwrap();
        assert_eq!(comm[(0, 0)], c(1.0, 0.0));
        assert_eq!(comm[(9, 9)], c(-1.0, 0.0));
        assert!(is_normal(&build(&HamiltonianSpec::chain(6, 0.7, 0.7, 0.0, 0.0)).unwrap(), tol));
    }

    #[test]
    fn pseudo_hermiticity_examples() {
        let tol = DEFAULT_CLASSIFY_TOL;
        let herm = build(&HamiltonianSpec::chain(6, 1.0, 1.0, 0.0, 1.0)).unwrap();
        assert!(check_pseudo_hermitian(&herm, &DenseComplexMatrix::identity(6), tol).unwrap());

        let spec = HamiltonianSpec::chain(10, 1.0, 0.5, 0.0, 0.0);
        let eta = gauge_metric(&spec).unwrap();
        assert!(check_pseudo_hermitian(&build(&spec).unwrap(), &eta, tol).unwrap());

        let pbc = build(&HamiltonianSpec::chain(10, 1.0, 0.0, 0.0, 1.0)).unwrap();
        assert!(!check_pseudo_hermitian(&pbc, &DenseComplexMatrix::identity(10), tol).unwrap());

        let singular = DenseComplexMatrix::zeros(10);
        assert!(matches!(
            check_pseudo_hermitian(&pbc, &singular, tol),
            Err(ModelError::SingularEta(_))
        ));
    }

    #[test]
    fn gauge_of_reciprocal_chain_is_trivial() {
        let spec = HamiltonianSpec::chain(5, 1.0, 1.0, 0.0, 0.0);
        let (s, h_sym) = gauge_transform(&spec).unwrap();
        assert!(s.approx_eq(&DenseComplexMatrix::identity(5), 0.0));
        assert!(h_sym.approx_eq(&build(&spec).unwrap(), 0.0));
    }

    #[test]
    fn gauge_symmetrizes_hopping() {
        let spec = HamiltonianSpec::chain(4, 1.0, 0.5, 0.0, 0.0);
        let (_, h_sym) = gauge_transform(&spec).unwrap();
        for j in 0..3 {
            assert!((h_sym[(j, j + 1)].re - 0.5f64.sqrt()).abs() < 1e-12);
            assert!((h_sym[(j + 1, j)].re - 0.5f64.sqrt()).abs() < 1e-12);
        }
        assert!(h_sym.approx_eq(&h_sym.transpose(), 1e-10));
    }

    #[test]
    fn gauge_errors() {
        assert_eq!(
            gauge_transform(&HamiltonianSpec::chain(4, 1.0, 0.0, 0.0, 0.0)).unwrap_err(),
            ModelError::UnidirectionalGauge
        );
        assert_eq!(
            gauge_transform(&HamiltonianSpec::chain(4, 1.0, 0.5, 0.0, 1.0)).unwrap_err(),
            ModelError::PeriodicGauge(1.0)
        );
        assert_eq!(gauge_transform(&HamiltonianSpec::pt2(0.1)).unwrap_err(), ModelError::NotAChain);
    }

    #[test]
    fn family_names_round_trip() {
        for f in [Family::Chain, Family::Jordan2, Family::Jordan2Loss, Family::Pt2] {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
    }

    fn chain_spec() -> impl Strategy<Value = HamiltonianSpec> {
        (2usize..16, -2.0f64..2.0, -2.0f64..2.0, 0.0f64..1.0, 0.0f64..=1.0)
            .prop_map(|(n, tl, tr, g, b)| HamiltonianSpec::chain(n, tl, tr, g, b))
    }

    proptest! {
        #[test]
        fn dimension_matches_spec(spec in chain_spec()) {
            prop_assert_eq!(build(&spec).unwrap().dim(), spec.n);
        }

        #[test]
        fn lossless_real_chain_is_real(spec in chain_spec()) {
            let spec = HamiltonianSpec { gamma: 0.0, ..spec };
            prop_assert!(build(&spec).unwrap().is_real(0.0));
        }

        #[test]
        fn periodic_chain_is_normal(n in 3usize..16, tl in -2.0f64..2.0, tr in -2.0f64..2.0, g in 0.0f64..1.0) {
            let h = build(&HamiltonianSpec::chain(n, tl, tr, g, 1.0)).unwrap();
            prop_assert!(is_normal(&h, DEFAULT_CLASSIFY_TOL));
        }

        #[test]
        fn open_nonreciprocal_chain_is_not_normal(n in 2usize..16, tl in 0.1f64..2.0, tr in 0.0f64..2.0) {
            prop_assume!((tl - tr).abs() > 1e-3);
            let h = build(&HamiltonianSpec::chain(n, tl, tr, 0.0, 0.0)).unwrap();
            prop_assert!(!is_normal(&h, DEFAULT_CLASSIFY_TOL));
        }

        #[test]
        fn gauge_metric_certifies_open_chain(n in 2usize..12, tl in 0.2f64..2.0, tr in 0.2f64..2.0) {
            let spec = HamiltonianSpec::chain(n, tl, tr, 0.0, 0.0);
            let eta = gauge_metric(&spec).unwrap();
            prop_assert!(check_pseudo_hermitian(&build(&spec).unwrap(), &eta, DEFAULT_CLASSIFY_TOL).unwrap());
        }
    }
}
