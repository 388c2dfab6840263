//! Matrix exponential by scaling and squaring around a diagonal Padé core.

use num_complex::Complex64;

use super::{multiply, solve, DenseComplexMatrix, LinalgError};

/// Degree of the diagonal Padé approximant.
const PADE_DEGREE: usize = 8;

/// The scaled matrix satisfies `‖A/2^s‖₁ ≤ SCALED_NORM_MAX`.
const SCALED_NORM_MAX: f64 = 0.5;

/// Coefficients `c_k = (2q-k)! q! / ((2q)! k! (q-k)!)` of the `[q/q]` Padé
/// approximant to `exp`.
fn pade_coefficients() -> [f64; PADE_DEGREE + 1] {
    let q = PADE_DEGREE as f64;
    let mut c = [0.0; PADE_DEGREE + 1];
    c[0] = 1.0;
    for k in 1..=PADE_DEGREE {
        let k_f = k as f64;
        c[k] = c[k - 1] * (q - k_f + 1.0) / (k_f * (2.0 * q - k_f + 1.0));
    }
    c
}

/// `exp(m)`; fails with [`LinalgError::Overflow`] if the result is not representable.
pub fn expm(m: &DenseComplexMatrix) -> Result<DenseComplexMatrix, LinalgError> {
    m.ensure_finite()?;
    let n = m.dim();
    let norm = m.norm_one();
    if norm == 0.0 {
        return Ok(DenseComplexMatrix::identity(n));
    }

    let squarings = if norm > SCALED_NORM_MAX {
        (norm / SCALED_NORM_MAX).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a = m.scale(Complex64::new(0.5f64.powi(squarings), 0.0));

    let c = pade_coefficients();
    // even part U = Σ c_2k A^2k, odd part V = Σ c_{2k+1} A^{2k+1}
    let a2 = multiply(&a, &a)?;
    let mut even = DenseComplexMatrix::identity(n).scale(Complex64::new(c[0], 0.0));
    let mut odd_inner = DenseComplexMatrix::identity(n).scale(Complex64::new(c[1], 0.0));
    let mut power = DenseComplexMatrix::identity(n);
    for k in 1..=PADE_DEGREE / 2 {
        power = multiply(&power, &a2)?;
        even = even.add(&power.scale(Complex64::new(c[2 * k], 0.0)))?;
        if 2 * k + 1 <= PADE_DEGREE {
            odd_inner = odd_inner.add(&power.scale(Complex64::new(c[2 * k + 1], 0.0)))?;
        }
    }
    let odd = multiply(&a, &odd_inner)?;

    let numer = even.add(&odd)?;
    let denom = even.sub(&odd)?;
    let mut result = solve(&denom, &numer)?;

    for _ in 0..squarings {
        result = multiply(&result, &result)?;
        if !result.is_finite() {
            return Err(LinalgError::Overflow);
        }
    }
    if !result.is_finite() {
        return Err(LinalgError::Overflow);
    }
    Ok(result)
}
