//! Thin wrappers over the LAPACK-backed dense solvers.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64 as C64;

/// Eigendecomposition of a real symmetric matrix; eigenvalues ascending,
/// eigenvectors as columns.
pub fn eigh_real(matrix: &Array2<f64>) -> Result<(Array1<f64>, Array2<f64>), String> {
    matrix
        .eigh(UPLO::Lower)
        .map_err(|e| format!("symmetric eigensolve failed: {e}"))
}

/// Eigenvalues of a complex Hermitian matrix, ascending.
pub fn eigvalsh_complex(matrix: &Array2<C64>) -> Result<Array1<f64>, String> {
    matrix
        .eigh(UPLO::Lower)
        .map(|(vals, _)| vals)
        .map_err(|e| format!("hermitian eigensolve failed: {e}"))
}
