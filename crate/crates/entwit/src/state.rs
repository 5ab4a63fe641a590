//! Pure states and density operators, with validation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::pauli::{vectorize, Operator, PauliVector, DIM};

const ALGEBRA_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-9;

/// Normalized four-qubit ket in the computational basis, `|i₁i₂i₃i₄⟩` with
/// qubit 1 as the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: [Complex64; DIM],
}

impl PureState {
    /// Normalizes the amplitude vector; a (near-)zero vector is rejected.
    pub fn new(mut amps: [Complex64; DIM]) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm <= 1e-8 {
            return Err(Error::ZeroNorm);
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(Self { amps })
    }

    /// Builds a ket from (basis index, amplitude) terms and normalizes.
    pub fn from_terms(terms: &[(usize, Complex64)]) -> Result<Self> {
        let mut amps = [Complex64::new(0.0, 0.0); DIM];
        for &(index, amp) in terms {
            amps[index] += amp;
        }
        Self::new(amps)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(index: usize) -> Self {
        let mut amps = [Complex64::new(0.0, 0.0); DIM];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn amplitudes(&self) -> &[Complex64; DIM] {
        &self.amps
    }

    pub fn density(&self) -> DensityOperator {
        density_from_pure(self)
    }
}

/// 16x16 Hermitian, positive semidefinite, unit-trace matrix.
///
/// Values of this type always satisfy [`validate_density`]; constructors
/// either check or are only reachable from spectrum-preserving maps.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    mat: Operator,
}

impl DensityOperator {
    pub fn new(mat: Operator) -> Result<Self> {
        validate_density(&mat)?;
        Ok(Self { mat })
    }

    pub(crate) fn unchecked(mat: Operator) -> Self {
        debug_assert!(validate_density(&mat).is_ok());
        Self { mat }
    }

    pub fn matrix(&self) -> &Operator {
        &self.mat
    }

    pub fn into_matrix(self) -> Operator {
        self.mat
    }

    pub fn maximally_mixed() -> Self {
        Self { mat: Operator::identity(DIM, DIM) / Complex64::new(DIM as f64, 0.0) }
    }

    /// `tr(ρ²)`; 1 for pure states, 1/16 for the maximally mixed state.
    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                acc += (self.mat[(i, j)] * self.mat[(j, i)]).re;
            }
        }
        acc
    }

    /// Pauli feature vector of the state.
    pub fn features(&self) -> PauliVector {
        vectorize(&self.mat).expect("density operators are Hermitian")
    }
}

/// Rank-1 projector `|ψ⟩⟨ψ|` of a normalized pure state.
pub fn density_from_pure(psi: &PureState) -> DensityOperator {
    let amps = psi.amplitudes();
    let mat = Operator::from_fn(DIM, DIM, |i, j| amps[i] * amps[j].conj());
    DensityOperator::unchecked(mat)
}

/// Checks Hermiticity (1e-10), unit trace (1e-10) and positive
/// semidefiniteness (eigenvalue floor -1e-9), reporting the first failure.
pub fn validate_density(mat: &Operator) -> Result<()> {
    if mat.nrows() != DIM || mat.ncols() != DIM {
        return Err(Error::ShapeMismatch { rows: mat.nrows(), cols: mat.ncols() });
    }
    let deviation = linalg::hermiticity_deviation(mat);
    if deviation > ALGEBRA_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let trace = mat.trace();
    if (trace.re - 1.0).abs() > ALGEBRA_TOL || trace.im.abs() > ALGEBRA_TOL {
        return Err(Error::TraceNotOne { trace: trace.re });
    }
    let min_eigenvalue = linalg::min_eigenvalue(mat);
    if min_eigenvalue < -PSD_TOL {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    Ok(())
}

/// Partial transpose over the qubits selected by `mask` (bit 3 ↔ qubit 1,
/// ..., bit 0 ↔ qubit 4).
pub fn partial_transpose(op: &Operator, mask: u8) -> Operator {
    let m = mask as usize & 0xf;
    Operator::from_fn(DIM, DIM, |row, col| {
        let r = (row & !m) | (col & m);
        let c = (col & !m) | (row & m);
        op[(r, c)]
    })
}

/// The seven bipartitions of four qubits, as transpose masks up to
/// complement: each single qubit, plus qubit 1 paired with each other.
pub const BIPARTITION_MASKS: [u8; 7] = [0b1000, 0b0100, 0b0010, 0b0001, 0b1100, 0b1010, 0b1001];

/// Smallest partial-transpose eigenvalue over all seven bipartitions.
/// Non-negative (within tolerance) for every separable state.
pub fn min_ppt_eigenvalue(rho: &DensityOperator) -> f64 {
    BIPARTITION_MASKS
        .iter()
        .map(|&mask| linalg::min_eigenvalue(&partial_transpose(rho.matrix(), mask)))
        .fold(f64::INFINITY, f64::min)
}

/// Reduced state of a single qubit (1-based), as a 2x2 matrix.
pub fn single_qubit_marginal(rho: &DensityOperator, qubit: usize) -> nalgebra::Matrix2<Complex64> {
    assert!((1..=4).contains(&qubit));
    let shift = 4 - qubit;
    let mut out = nalgebra::Matrix2::zeros();
    for a in 0..2 {
        for b in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for rest in 0..8 {
                // scatter the 3 remaining bits around the traced qubit
                let low_mask = (1 << shift) - 1;
                let low = rest & low_mask;
                let high = (rest & !low_mask) << 1;
                let row = high | (a << shift) | low;
                let col = high | (b << shift) | low;
                acc += rho.matrix()[(row, col)];
            }
            out[(a, b)] = acc;
        }
    }
    out
}
