//! Small dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::{ComplexField, DMatrix};

/// Largest induced 1-norm (max column sum).
fn one_norm<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|z| z.clone().modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// The matrix is scaled by `2^-s` until its 1-norm is at most 1/2, the series
/// is summed until the next term falls below `1e-18` relative to the partial
/// sum, and the result is squared `s` times.
pub fn expm<T: ComplexField<RealField = f64> + Copy>(a: &DMatrix<T>) -> DMatrix<T> {
    assert!(a.is_square(), "expm needs a square matrix");
    let dim = a.nrows();
    let norm = one_norm(a);
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = libm::ceil(libm::log2(norm / 0.5)) as u32;
    }
    let scale = T::from_real(libm::exp2(-f64::from(squarings)));
    let b = a.map(|z| z * scale);

    let mut sum = DMatrix::<T>::identity(dim, dim);
    let mut term = DMatrix::<T>::identity(dim, dim);
    for k in 1..=40u32 {
        term = &term * &b;
        let inv_k = T::from_real(1.0 / f64::from(k));
        term.iter_mut().for_each(|z| *z *= inv_k);
        sum += &term;
        if one_norm(&term) <= 1e-18 * one_norm(&sum).max(1.0) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Frobenius norm of a real matrix.
pub fn frobenius(a: &DMatrix<f64>) -> f64 {
    libm::sqrt(a.iter().map(|x| x * x).sum::<f64>())
}

/// `‖AᵀA − I‖_F`.
pub fn orthogonality_error(a: &DMatrix<f64>) -> f64 {
    let n = a.ncols();
    frobenius(&(a.transpose() * a - DMatrix::<f64>::identity(n, n)))
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff<T: ComplexField<RealField = f64> + Copy>(a: &DMatrix<T>, b: &DMatrix<T>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (*x - *y).modulus()).fold(0.0, f64::max)
}
