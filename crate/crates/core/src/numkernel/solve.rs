//! LU factorization with partial pivoting.

use num_complex::Complex64;

use super::{DenseComplexMatrix, LinalgError};

/// Pivots with modulus below `PIVOT_RTOL * max|a_ij|` are treated as zero.
const PIVOT_RTOL: f64 = 1e-14;

/// Solves `a·x = b` for the square right-hand side `b`.
pub fn solve(
    a: &DenseComplexMatrix,
    b: &DenseComplexMatrix,
) -> Result<DenseComplexMatrix, LinalgError> {
    let n = a.dim();
    if b.dim() != n {
        return Err(LinalgError::DimensionMismatch { left: n, right: b.dim() });
    }
    a.ensure_finite()?;
    b.ensure_finite()?;

    let mut lu = a.clone();
    let mut x = b.clone();
    let threshold = PIVOT_RTOL * a.norm_max();

    for col in 0..n {
        let (piv, piv_abs) = (col..n)
            .map(|r| (r, lu[(r, col)].norm()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv_abs <= threshold || piv_abs == 0.0 {
            return Err(LinalgError::Singular { pivot: col });
        }
        if piv != col {
            for j in 0..n {
                let tmp = lu[(col, j)];
                lu[(col, j)] = lu[(piv, j)];
                lu[(piv, j)] = tmp;
                let tmp = x[(col, j)];
                x[(col, j)] = x[(piv, j)];
                x[(piv, j)] = tmp;
            }
        }
        let inv_p = Complex64::new(1.0, 0.0) / lu[(col, col)];
        for r in col + 1..n {
            let f = lu[(r, col)] * inv_p;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            lu[(r, col)] = f;
            for j in col + 1..n {
                let u = lu[(col, j)];
                lu[(r, j)] -= f * u;
            }
            for j in 0..n {
                let u = x[(col, j)];
                x[(r, j)] -= f * u;
            }
        }
    }

    for j in 0..n {
        for i in (0..n).rev() {
            let mut s = x[(i, j)];
            for k in i + 1..n {
                s -= lu[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = s / lu[(i, i)];
        }
    }
    Ok(x)
}

pub fn inverse(a: &DenseComplexMatrix) -> Result<DenseComplexMatrix, LinalgError> {
    solve(a, &DenseComplexMatrix::identity(a.dim()))
}
