//! One-sided (Hestenes) Jacobi SVD.
//!
//! Used for numerical rank, null spaces and 2-norm condition numbers. Jacobi
//! keeps small singular values to high relative accuracy, which matters when
//! the eigenvector matrix of a nearly defective operator is being judged.

use num_complex::Complex64;

use super::{ComplexVector, DenseComplexMatrix, LinalgError};

const MAX_SWEEPS: usize = 80;

/// Singular values (descending) with matching right singular vectors.
#[derive(Clone, Debug)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    /// `right_vectors[k]` pairs with `singular_values[k]`.
    pub right_vectors: Vec<ComplexVector>,
}

pub fn svd_jacobi(a: &DenseComplexMatrix) -> Result<Svd, LinalgError> {
    a.ensure_finite()?;
    let n = a.dim();
    // column-major working copies
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j).0).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n).map(|j| ComplexVector::basis(n, j).0).collect();

    // columns below this norm carry no information at working precision
    let floor = f64::EPSILON * f64::EPSILON * a.norm_fro();
    let mut converged = n < 2;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(LinalgError::NoConvergence { iterations: sweeps });
        }
        sweeps += 1;
        converged = true;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 =
                    cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0
                    || g <= f64::EPSILON * (alpha * beta).sqrt()
                    || alpha.sqrt().min(beta.sqrt()) <= floor
                {
                    continue;
                }
                converged = false;
                // rotate q by the phase of gamma so the 2x2 Gram block is real
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, phase, c, s);
                rotate(&mut v, p, q, phase, c, s);
            }
        }
    }

    let mut order: Vec<(f64, usize)> = cols
        .iter()
        .enumerate()
        .map(|(k, c)| (c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(), k))
        .collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    Ok(Svd {
        singular_values: order.iter().map(|&(s, _)| s).collect(),
        right_vectors: order.iter().map(|&(_, k)| ComplexVector(v[k].clone())).collect(),
    })
}

fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, phase: Complex64, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let cp = &mut lo[p];
    let cq = &mut hi[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = *y * phase;
        let xn = *x * c - yq * s;
        let yn = *x * s + yq * c;
        *x = xn;
        *y = yn;
    }
}

pub fn singular_values(a: &DenseComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    Ok(svd_jacobi(a)?.singular_values)
}

/// Orthonormal basis of the numerical null space of `a`: right singular vectors
/// whose singular value is at most `rank_tol`.
pub fn null_space(
    a: &DenseComplexMatrix,
    rank_tol: f64,
) -> Result<Vec<ComplexVector>, LinalgError> {
    let svd = svd_jacobi(a)?;
    Ok(svd
        .singular_values
        .iter()
        .zip(svd.right_vectors)
        .filter(|(&s, _)| s <= rank_tol)
        .map(|(_, v)| v)
        .collect())
}
