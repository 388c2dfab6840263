//! Dense square complex matrices and complex vectors.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use super::LinalgError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
///
/// No `PartialEq`; compare with [`approx_eq`](Self::approx_eq)
/// and an explicit tolerance.
#[derive(Clone)]
pub struct DenseComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from rows; every row must have as many entries as there are rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(LinalgError::NotSquare { rows: n, cols: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Builds the matrix whose k-th column is `cols[k]`.
    pub fn from_columns(cols: &[ComplexVector]) -> Result<Self, LinalgError> {
        let n = cols.len();
        let mut m = Self::zeros(n);
        for (k, c) in cols.iter().enumerate() {
            if c.len() != n {
                return Err(LinalgError::NotSquare { rows: c.len(), cols: n });
            }
            for i in 0..n {
                m[(i, k)] = c[i];
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn column(&self, k: usize) -> ComplexVector {
        ComplexVector((0..self.n).map(|i| self[(i, k)]).collect())
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn ensure_finite(&self) -> Result<(), LinalgError> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(LinalgError::NonFinite)
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_dim(other)?;
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_dim(other)?;
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// `self + s·I`
    pub fn shift_diagonal(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out[(i, i)] += s;
        }
        out
    }

    pub fn matvec(&self, v: &ComplexVector) -> Result<ComplexVector, LinalgError> {
        if v.len() != self.n {
            return Err(LinalgError::DimensionMismatch { left: self.n, right: v.len() });
        }
        Ok(ComplexVector(
            (0..self.n)
                .map(|i| self.row(i).iter().zip(v.iter()).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise comparison: true iff every `|a_ij - b_ij| <= tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n == other.n
            && self.data.iter().zip(&other.data).all(|(a, b)| (a - b).norm() <= tol)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.im.abs() <= tol)
    }

    fn check_same_dim(&self, other: &Self) -> Result<(), LinalgError> {
        if self.n != other.n {
            return Err(LinalgError::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for DenseComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for DenseComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for DenseComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseComplexMatrix({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.4e}{:+.4e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Matrix product `a·b`.
pub fn multiply(
    a: &DenseComplexMatrix,
    b: &DenseComplexMatrix,
) -> Result<DenseComplexMatrix, LinalgError> {
    a.check_same_dim(b)?;
    let n = a.n;
    let mut out = DenseComplexMatrix::zeros(n);
    for i in 0..n {
        for k in 0..n {
            let aik = a[(i, k)];
            if aik == ZERO {
                continue;
            }
            let brow = b.row(k);
            let orow = &mut out.data[i * n..(i + 1) * n];
            for (o, &bkj) in orow.iter_mut().zip(brow) {
                *o += aik * bkj;
            }
        }
    }
    Ok(out)
}

/// Complex column vector.
#[derive(Clone, Debug, Default)]
pub struct ComplexVector(pub Vec<Complex64>);

impl ComplexVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![ZERO; n])
    }

    /// Coordinate basis vector `e_k` (zero-based `k`).
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k] = ONE;
        v
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn dot(&self, other: &Self) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0.iter().map(|&z| z * s).collect())
    }

    /// Returns the vector scaled to unit Euclidean norm; a zero vector is returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scale(Complex64::new(1.0 / n, 0.0))
        }
    }

    /// `self + s·other`
    pub fn axpy(&self, s: Complex64, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    #[inline]
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl From<Vec<Complex64>> for ComplexVector {
    fn from(v: Vec<Complex64>) -> Self {
        Self(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift3() -> DenseComplexMatrix {
        DenseComplexMatrix::from_real_rows(&[
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn identity_is_left_neutral() {
        let a = DenseComplexMatrix::from_rows(&[
            vec![Complex64::new(1.0, 2.0), Complex64::new(-3.0, 0.5)],
            vec![Complex64::new(0.0, -1.0), Complex64::new(4.0, 0.0)],
        ])
        .unwrap();
        let p = multiply(&DenseComplexMatrix::identity(2), &a).unwrap();
        assert!(p.approx_eq(&a, 0.0));
    }

    #[test]
    fn zero_annihilates() {
        let p = multiply(&shift3(), &DenseComplexMatrix::zeros(3)).unwrap();
        assert!(p.approx_eq(&DenseComplexMatrix::zeros(3), 0.0));
    }

    #[test]
    fn shift_squared_is_two_step_shift() {
        let s = shift3();
        let p = multiply(&s, &s).unwrap();
        // only (1,3) survives (one-based)
        let mut expected = DenseComplexMatrix::zeros(3);
        expected[(0, 2)] = ONE;
        assert!(p.approx_eq(&expected, 0.0));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let err = multiply(&DenseComplexMatrix::zeros(2), &DenseComplexMatrix::zeros(3));
        assert!(matches!(err, Err(LinalgError::DimensionMismatch { left: 2, right: 3 })));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = DenseComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0]]);
        assert!(err.is_err());
    }
}
