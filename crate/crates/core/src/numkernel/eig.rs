//! Complex eigendecomposition: Householder reduction to Hessenberg form,
//! single-shift QR iteration to a Schur form, and eigenvectors by
//! back-substitution on the triangular factor.

use num_complex::Complex64;

use super::{null_space, svd_jacobi, ComplexVector, DenseComplexMatrix, LinalgError};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// QR sweeps allowed per eigenvalue before giving up.
const MAX_ITER_PER_EIGENVALUE: usize = 40;

/// Default relative tolerance for treating eigenvalues as degenerate.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-6;

/// Result of [`eig`].
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<Complex64>,
    /// Unit-norm right eigenvectors, `vectors[k]` pairs with `values[k]`.
    pub vectors: Vec<ComplexVector>,
    /// 2-norm condition number of the eigenvector matrix; `f64::INFINITY`
    /// when some eigenvalue cluster lacks a full set of eigenvectors.
    pub condition: f64,
}

/// Schur decomposition `m = q·t·q†` with `t` upper triangular.
pub fn schur(
    m: &DenseComplexMatrix,
) -> Result<(DenseComplexMatrix, DenseComplexMatrix), LinalgError> {
    m.ensure_finite()?;
    let (mut t, mut q) = hessenberg(m);
    qr_iterate(&mut t, &mut q)?;
    Ok((t, q))
}

/// Eigenvalues and right eigenvectors of `m`.
///
/// Eigenvalues within `tol·max(1, ‖m‖_F)` of each other form a cluster. For a
/// cluster of multiplicity `k` the null space of `m - λ̄I` is inspected with the
/// same threshold: if it has dimension `k` the cluster's vectors are replaced
/// by an orthonormal null-space basis, otherwise the cluster is defective and
/// the condition number is reported as infinite.
pub fn eig(m: &DenseComplexMatrix, tol: f64) -> Result<Eigen, LinalgError> {
    let n = m.dim();
    if n == 0 {
        return Ok(Eigen { values: vec![], vectors: vec![], condition: 1.0 });
    }
    // work on P·m·Pᵀ so triangular structure is exposed before QR
    let perm = isolating_permutation(m);
    let permuted = permute(m, &perm);
    let (t, q) = schur(&permuted)?;
    let values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    let mut vectors: Vec<ComplexVector> = triangular_eigenvectors(&t, &q)
        .into_iter()
        .map(|v| {
            let mut w = ComplexVector::zeros(n);
            for (i, &p) in perm.iter().enumerate() {
                w[p] = v[i];
            }
            w
        })
        .collect();

    let scale = m.norm_fro().max(1.0);
    let mut deficient = false;
    for cluster in clusters(&values, tol * scale) {
        if cluster.len() < 2 {
            continue;
        }
        let center = cluster.iter().map(|&k| values[k]).sum::<Complex64>()
            / cluster.len() as f64;
        let basis = null_space(&m.shift_diagonal(-center), tol * scale)?;
        if basis.len() >= cluster.len() {
            for (&k, v) in cluster.iter().zip(basis) {
                vectors[k] = v;
            }
        } else {
            deficient = true;
        }
    }

    let condition = if deficient { f64::INFINITY } else { condition_number(&vectors)? };
    Ok(Eigen { values, vectors, condition })
}

/// 2-norm condition number of the matrix with the given columns.
pub(crate) fn condition_number(cols: &[ComplexVector]) -> Result<f64, LinalgError> {
    let v = DenseComplexMatrix::from_columns(cols)?;
    let s = svd_jacobi(&v)?.singular_values;
    let (max, min) = (s[0], s[s.len() - 1]);
    Ok(if min == 0.0 { f64::INFINITY } else { max / min })
}

/// Permutation that moves rows with no off-diagonal entries (in the active
/// window) to the bottom and such columns to the top, so that eigenvalues
/// decoupled by zero patterns end up on the diagonal of an upper block
/// triangular matrix. Row `i` of the permuted matrix is row `perm[i]` of `m`.
fn isolating_permutation(m: &DenseComplexMatrix) -> Vec<usize> {
    let n = m.dim();
    let mut perm: Vec<usize> = (0..n).collect();
    if n < 2 {
        return perm;
    }
    let at = |perm: &[usize], i: usize, j: usize| m[(perm[i], perm[j])];
    let mut lo = 0;
    let mut hi = n - 1;
    'rows: loop {
        for j in (lo..=hi).rev() {
            if (lo..=hi).all(|k| k == j || at(&perm, j, k) == ZERO) {
                perm.swap(j, hi);
                if hi == lo {
                    return perm;
                }
                hi -= 1;
                continue 'rows;
            }
        }
        break;
    }
    'cols: loop {
        for j in lo..=hi {
            if (lo..=hi).all(|k| k == j || at(&perm, k, j) == ZERO) {
                perm.swap(j, lo);
                if lo == hi {
                    return perm;
                }
                lo += 1;
                continue 'cols;
            }
        }
        break;
    }
    perm
}

fn permute(m: &DenseComplexMatrix, perm: &[usize]) -> DenseComplexMatrix {
    let n = m.dim();
    let mut out = DenseComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = m[(perm[i], perm[j])];
        }
    }
    out
}

/// Groups indices whose values are transitively within `tol` of each other.
pub fn clusters(values: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (root(&mut label, i), root(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut label, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Returns `(h, q)` with `h = q†·m·q` upper Hessenberg.
fn hessenberg(m: &DenseComplexMatrix) -> (DenseComplexMatrix, DenseComplexMatrix) {
    let n = m.dim();
    let mut h = m.clone();
    let mut q = DenseComplexMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail = x[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if xnorm == 0.0 || tail == 0.0 {
            continue;
        }
        let phase = if x[0] == ZERO { ONE } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // h <- P h P with P = I - 2 v v†, acting on rows/cols k+1..n
        for j in 0..n {
            let s: Complex64 = v.iter().enumerate().map(|(a, vi)| vi.conj() * h[(k + 1 + a, j)]).sum();
            for (a, vi) in v.iter().enumerate() {
                h[(k + 1 + a, j)] -= 2.0 * vi * s;
            }
        }
        for i in 0..n {
            let s: Complex64 = v.iter().enumerate().map(|(a, vi)| h[(i, k + 1 + a)] * vi).sum();
            for (a, vi) in v.iter().enumerate() {
                h[(i, k + 1 + a)] -= 2.0 * s * vi.conj();
            }
        }
        for i in 0..n {
            let s: Complex64 = v.iter().enumerate().map(|(a, vi)| q[(i, k + 1 + a)] * vi).sum();
            for (a, vi) in v.iter().enumerate() {
                q[(i, k + 1 + a)] -= 2.0 * s * vi.conj();
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

/// Plane rotation `G = [[c, s], [-conj(s), c]]` with real `c`.
#[derive(Clone, Copy)]
struct Givens {
    c: f64,
    s: Complex64,
}

impl Givens {
    /// Rotation with `G·[a; b] = [r; 0]`.
    fn zeroing(a: Complex64, b: Complex64) -> Self {
        let na = a.norm();
        let nb = b.norm();
        if nb == 0.0 {
            return Self { c: 1.0, s: ZERO };
        }
        if na == 0.0 {
            return Self { c: 0.0, s: b.conj() / nb };
        }
        let rho = na.hypot(nb);
        Self { c: na / rho, s: (a / na) * b.conj() / rho }
    }

    /// Rows `i, i+1` of `m`, columns `cols`: `m <- G·m`.
    fn apply_left(&self, m: &mut DenseComplexMatrix, i: usize, cols: std::ops::Range<usize>) {
        for j in cols {
            let x = m[(i, j)];
            let y = m[(i + 1, j)];
            m[(i, j)] = self.c * x + self.s * y;
            m[(i + 1, j)] = -self.s.conj() * x + self.c * y;
        }
    }

    /// Columns `i, i+1` of `m`, rows `rows`: `m <- m·G†`.
    fn apply_right_adjoint(&self, m: &mut DenseComplexMatrix, i: usize, rows: std::ops::Range<usize>) {
        for r in rows {
            let x = m[(r, i)];
            let y = m[(r, i + 1)];
            m[(r, i)] = self.c * x + self.s.conj() * y;
            m[(r, i + 1)] = -self.s * x + self.c * y;
        }
    }
}

fn negligible(t: &DenseComplexMatrix, i: usize, norm: f64) -> bool {
    let sub = t[(i + 1, i)].norm();
    let mut diag = t[(i, i)].norm() + t[(i + 1, i + 1)].norm();
    if diag == 0.0 {
        diag = norm;
    }
    sub <= f64::EPSILON * diag || sub < f64::MIN_POSITIVE
}

fn wilkinson_shift(t: &DenseComplexMatrix, iu: usize, iter: usize) -> Complex64 {
    if iter > 0 && iter % 10 == 0 {
        // exceptional shift
        let mut s = t[(iu, iu - 1)].re.abs();
        if iu >= 2 {
            s += t[(iu - 1, iu - 2)].re.abs();
        }
        return t[(iu, iu)] + s;
    }
    let a = t[(iu - 1, iu - 1)];
    let b = t[(iu - 1, iu)];
    let c = t[(iu, iu - 1)];
    let d = t[(iu, iu)];
    let norm = a.norm() + b.norm() + c.norm() + d.norm();
    if norm == 0.0 {
        return ZERO;
    }
    let (a, b, c, d) = (a / norm, b / norm, c / norm, d / norm);
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (mut e1, mut e2) = (mid + disc, mid - disc);
    // recompute the smaller root from the determinant to avoid cancellation
    let det = a * d - b * c;
    if e1.norm() > e2.norm() {
        e2 = det / e1;
    } else if e2.norm() > 0.0 {
        e1 = det / e2;
    }
    if (e1 - d).norm() < (e2 - d).norm() {
        e1 * norm
    } else {
        e2 * norm
    }
}

fn qr_iterate(t: &mut DenseComplexMatrix, q: &mut DenseComplexMatrix) -> Result<(), LinalgError> {
    let n = t.dim();
    if n < 2 {
        return Ok(());
    }
    let norm = t.norm_fro();
    let max_total = MAX_ITER_PER_EIGENVALUE * n;
    let mut iu = n - 1;
    let mut iter = 0;
    let mut total = 0;
    loop {
        while iu > 0 && negligible(t, iu - 1, norm) {
            t[(iu, iu - 1)] = ZERO;
            iter = 0;
            iu -= 1;
        }
        if iu == 0 {
            return Ok(());
        }
        iter += 1;
        total += 1;
        if total > max_total {
            return Err(LinalgError::NoConvergence { iterations: total - 1 });
        }
        let mut il = iu - 1;
        while il > 0 && !negligible(t, il - 1, norm) {
            il -= 1;
        }
        let shift = wilkinson_shift(t, iu, iter);

        let g = Givens::zeroing(t[(il, il)] - shift, t[(il + 1, il)]);
        g.apply_left(t, il, il..n);
        g.apply_right_adjoint(t, il, 0..(il + 2).min(iu) + 1);
        g.apply_right_adjoint(q, il, 0..n);
        for i in il + 1..iu {
            let g = Givens::zeroing(t[(i, i - 1)], t[(i + 1, i - 1)]);
            g.apply_left(t, i, i - 1..n);
            t[(i + 1, i - 1)] = ZERO;
            g.apply_right_adjoint(t, i, 0..(i + 2).min(iu) + 1);
            g.apply_right_adjoint(q, i, 0..n);
        }
    }
}

/// Right eigenvectors `q·x_k` where `t·x_k = t_kk·x_k`, unit-normalized.
fn triangular_eigenvectors(t: &DenseComplexMatrix, q: &DenseComplexMatrix) -> Vec<ComplexVector> {
    let n = t.dim();
    let small = (f64::EPSILON * t.norm_fro()).max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut x = vec![ZERO; n];
        x[k] = ONE;
        for i in (0..k).rev() {
            let s: Complex64 = (i + 1..=k).map(|j| t[(i, j)] * x[j]).sum();
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < small {
                denom = Complex64::new(small, 0.0);
            }
            x[i] = -s / denom;
            let mag = x[i].norm();
            if mag > 1e100 {
                for z in x[i..=k].iter_mut() {
                    *z /= mag;
                }
            }
        }
        let v = q.matvec(&ComplexVector(x)).expect("dimensions agree");
        out.push(v.normalized());
    }
    out
}
