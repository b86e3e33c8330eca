//! Small dense Hermitian helpers over nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and the
/// eigenvectors in matching columns.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    assert!(m.is_square(), "eigh needs a square matrix");
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Largest elementwise deviation of `m` from its adjoint.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..m.nrows() {
        for c in r..m.ncols() {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// `(m + m†)/2` after checking the asymmetry is below `tol`.
pub fn symmetrize(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    let dev = hermiticity_deviation(m);
    if dev > tol {
        return Err(Error::NotHermitian(dev));
    }
    Ok((m + m.adjoint()).scale(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_hermitian_eigenpairs() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        // [[0, -i], [i, 0]] has eigenvalues -1 and 1
        let m = CMatrix::from_row_slice(2, 2, &[0.0 * one, -i, i, 0.0 * one]);
        let (vals, vecs) = eigh(&m);
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        let resid = &m * &vecs
            - &vecs
                * CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    2,
                    vals.iter().map(|&v| Complex64::new(v, 0.0)),
                ));
        assert!(resid.norm() < 1e-14);
    }

    #[test]
    fn symmetrize_rejects_large_asymmetry() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        assert!(symmetrize(&m, 1e-8).is_err());
    }
}
