//! Small dense linear-algebra helpers shared across modules.

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;

use crate::pauli::{Operator, DIM};

/// Eigenvalues of a Hermitian operator, unsorted.
pub fn hermitian_eigenvalues(op: &Operator) -> Vec<f64> {
    SymmetricEigen::new(op.clone()).eigenvalues.iter().copied().collect()
}

pub fn min_eigenvalue(op: &Operator) -> f64 {
    hermitian_eigenvalues(op).into_iter().fold(f64::INFINITY, f64::min)
}

pub fn max_abs_eigenvalue(op: &Operator) -> f64 {
    hermitian_eigenvalues(op).into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Largest entry of |M - M†|.
pub fn hermiticity_deviation(op: &Operator) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..op.nrows() {
        for j in 0..op.ncols() {
            dev = dev.max((op[(i, j)] - op[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Tensor product of four single-qubit operators, qubit 1 as the most
/// significant bit of the computational-basis index.
pub fn kron4(factors: &[Matrix2<Complex64>; 4]) -> Operator {
    DMatrix::from_fn(DIM, DIM, |row, col| {
        (0..4).fold(Complex64::new(1.0, 0.0), |acc, q| {
            let shift = 3 - q;
            acc * factors[q][((row >> shift) & 1, (col >> shift) & 1)]
        })
    })
}
