//! Orthonormal multi-qubit Pauli basis for four qubits and the vector
//! representation of Hermitian operators built on it.
//!
//! Basis element `i` is the tensor product of the four single-qubit factors
//! `{I, σx, σy, σz}/√2` selected by the base-4 digits of `i`, with digit
//! `i₁` (the most significant) acting on qubit 1. The 256 elements are
//! orthonormal under the Hilbert–Schmidt inner product, so a Hermitian
//! operator maps to a vector of 256 real coefficients whose Euclidean norm
//! equals the operator's Hilbert–Schmidt norm.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const N_QUBITS: usize = 4;
/// Hilbert-space dimension, 2^4.
pub const DIM: usize = 16;
/// Feature-space dimension, 4^4.
pub const N_FEATURES: usize = 256;

/// Dense complex operator on the four-qubit Hilbert space.
pub type Operator = DMatrix<Complex64>;

const HERMITICITY_TOL: f64 = 1e-8;

/// Nonzero entries of each basis element: every factor contributes exactly
/// two, so each 16x16 element has 16 nonzeros.
type SparseElement = [(u8, u8, Complex64); 16];

fn sparse_basis() -> &'static [SparseElement; N_FEATURES] {
    static TABLE: OnceLock<Box<[SparseElement; N_FEATURES]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let z = Complex64::new(0.0, 0.0);
        // (row, col, value) pairs of the unnormalized I, σx, σy, σz
        let pauli: [[(u8, u8, Complex64); 2]; 4] = [
            [(0, 0, Complex64::new(1.0, 0.0)), (1, 1, Complex64::new(1.0, 0.0))],
            [(0, 1, Complex64::new(1.0, 0.0)), (1, 0, Complex64::new(1.0, 0.0))],
            [(0, 1, Complex64::new(0.0, -1.0)), (1, 0, Complex64::new(0.0, 1.0))],
            [(0, 0, Complex64::new(1.0, 0.0)), (1, 1, Complex64::new(-1.0, 0.0))],
        ];
        let mut table = Box::new([[(0u8, 0u8, z); 16]; N_FEATURES]);
        for (index, element) in table.iter_mut().enumerate() {
            let digits = base4_digits(index);
            for (slot, choice) in element.iter_mut().zip(0u8..16) {
                let mut row = 0u8;
                let mut col = 0u8;
                let mut value = Complex64::new(0.25, 0.0); // (1/√2)^4
                for (q, &digit) in digits.iter().enumerate() {
                    let (r, c, v) = pauli[digit][((choice >> (3 - q)) & 1) as usize];
                    row |= r << (3 - q);
                    col |= c << (3 - q);
                    value *= v;
                }
                *slot = (row, col, value);
            }
        }
        table
    })
}

/// Base-4 digits (i₁, i₂, i₃, i₄) of a feature index, qubit 1 first.
fn base4_digits(index: usize) -> [usize; 4] {
    [(index >> 6) & 3, (index >> 4) & 3, (index >> 2) & 3, index & 3]
}

/// One element of the orthonormal Pauli basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisElement {
    pub index: usize,
    pub matrix: Operator,
}

pub fn basis_element(index: usize) -> Result<BasisElement> {
    if index >= N_FEATURES {
        return Err(Error::BasisIndex(index));
    }
    let mut matrix = Operator::zeros(DIM, DIM);
    for &(row, col, value) in &sparse_basis()[index] {
        matrix[(row as usize, col as usize)] = value;
    }
    Ok(BasisElement { index, matrix })
}

/// Real coefficients of an operator over the 256 Pauli basis elements; the
/// feature vector seen by the classifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliVector {
    coeffs: Box<[f64; N_FEATURES]>,
}

impl PauliVector {
    pub fn new(coeffs: [f64; N_FEATURES]) -> Result<Self> {
        if let Some(bad) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        Ok(Self { coeffs: Box::new(coeffs) })
    }

    pub fn zeros() -> Self {
        Self { coeffs: Box::new([0.0; N_FEATURES]) }
    }

    /// Unit vector along one basis index.
    pub fn unit(index: usize) -> Result<Self> {
        if index >= N_FEATURES {
            return Err(Error::BasisIndex(index));
        }
        let mut v = Self::zeros();
        v.coeffs[index] = 1.0;
        Ok(v)
    }

    pub fn coeffs(&self) -> &[f64; N_FEATURES] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64; N_FEATURES] {
        &mut self.coeffs
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(other.coeffs.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn squared_distance(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c *= factor;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *c += o;
        }
        out
    }
}

impl std::ops::Index<usize> for PauliVector {
    type Output = f64;
    fn index(&self, index: usize) -> &f64 {
        &self.coeffs[index]
    }
}

fn check_shape(op: &Operator) -> Result<()> {
    if op.nrows() != DIM || op.ncols() != DIM {
        return Err(Error::ShapeMismatch { rows: op.nrows(), cols: op.ncols() });
    }
    Ok(())
}

/// Expands an operator over the Pauli basis: `coeffs[k] = tr(E_k R)`.
///
/// The coefficients of a Hermitian operator are real; an imaginary part
/// above 1e-8 on any coefficient rejects the input as non-Hermitian.
pub fn vectorize(op: &Operator) -> Result<PauliVector> {
    check_shape(op)?;
    let mut coeffs = [0.0; N_FEATURES];
    let mut max_imag: f64 = 0.0;
    for (k, element) in sparse_basis().iter().enumerate() {
        let mut t = Complex64::new(0.0, 0.0);
        for &(row, col, value) in element {
            t += value * op[(col as usize, row as usize)];
        }
        coeffs[k] = t.re;
        max_imag = max_imag.max(t.im.abs());
    }
    if max_imag > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation: max_imag });
    }
    PauliVector::new(coeffs)
}

/// Rebuilds the Hermitian operator `Σ_k coeffs[k] E_k`.
pub fn devectorize(v: &PauliVector) -> Result<Operator> {
    if let Some(bad) = v.coeffs().iter().position(|c| !c.is_finite()) {
        return Err(Error::NonFinite(bad));
    }
    let mut op = Operator::zeros(DIM, DIM);
    for (k, element) in sparse_basis().iter().enumerate() {
        let c = v.coeffs()[k];
        if c == 0.0 {
            continue;
        }
        for &(row, col, value) in element {
            op[(row as usize, col as usize)] += value * c;
        }
    }
    Ok(op)
}

/// Hilbert–Schmidt inner product `tr(A† B)`.
pub fn hs_inner(a: &Operator, b: &Operator) -> Result<Complex64> {
    check_shape(a)?;
    check_shape(b)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..DIM {
        for j in 0..DIM {
            acc += a[(i, j)].conj() * b[(i, j)];
        }
    }
    Ok(acc)
}
