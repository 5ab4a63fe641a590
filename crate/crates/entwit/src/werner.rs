//! Four-qubit Werner states: the states invariant under conjugation by
//! `U₁⊗U₂⊗U₁⊗U₂`.
//!
//! The invariant operator subspace is spanned by four orthogonal projectors
//! built from the symmetric/antisymmetric split of the qubit pairs (1,3) and
//! (2,4) — the pairs that share a unitary under the diagonal action. The
//! twirling channel projects any state onto that subspace, and separability
//! inside the family is decided by four closed-form inequalities on the
//! projector weights.

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::pauli::{Operator, DIM};
use crate::sampling::{sample_haar_pure, sample_hs_mixed, sample_separable};
use crate::state::DensityOperator;

const CRITERIA_TOL: f64 = 1e-9;
const VIOLATION_MARGIN: f64 = 1e-6;
const REJECTION_CAP: usize = 100_000;

/// Orthogonal projectors Q₁…Q₄ spanning the `U₁⊗U₂⊗U₁⊗U₂`-invariant
/// subspace, with ranks (9, 3, 3, 1).
#[derive(Debug, Clone)]
pub struct InvariantProjectors {
    projectors: [Operator; 4],
    ranks: [f64; 4],
}

impl InvariantProjectors {
    pub fn get() -> &'static Self {
        static CACHE: OnceLock<InvariantProjectors> = OnceLock::new();
        CACHE.get_or_init(Self::build)
    }

    fn build() -> Self {
        // Swap permutations of the qubit pairs sharing a unitary: (1,3) acts
        // on index bits 3 and 1, (2,4) on bits 2 and 0.
        let swap_13 = swap_matrix(3, 1);
        let swap_24 = swap_matrix(2, 0);
        let id = Operator::identity(DIM, DIM);
        let half = Complex64::new(0.5, 0.0);
        let p_plus_13 = (&id + &swap_13) * half;
        let p_minus_13 = (&id - &swap_13) * half;
        let p_plus_24 = (&id + &swap_24) * half;
        let p_minus_24 = (&id - &swap_24) * half;
        let projectors = [
            &p_plus_13 * &p_plus_24,
            &p_plus_13 * &p_minus_24,
            &p_minus_13 * &p_plus_24,
            &p_minus_13 * &p_minus_24,
        ];
        let ranks = [9.0, 3.0, 3.0, 1.0];
        debug_assert!(projectors
            .iter()
            .zip(ranks.iter())
            .all(|(q, r)| (q.trace().re - r).abs() < 1e-12));
        Self { projectors, ranks }
    }

    pub fn projectors(&self) -> &[Operator; 4] {
        &self.projectors
    }

    pub fn ranks(&self) -> &[f64; 4] {
        &self.ranks
    }
}

fn swap_matrix(bit_a: usize, bit_b: usize) -> Operator {
    Operator::from_fn(DIM, DIM, |row, col| {
        let a = (col >> bit_a) & 1;
        let b = (col >> bit_b) & 1;
        let swapped = (col & !((1 << bit_a) | (1 << bit_b))) | (b << bit_a) | (a << bit_b);
        if row == swapped {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// The cached projector set.
pub fn invariant_projectors() -> &'static InvariantProjectors {
    InvariantProjectors::get()
}

/// Projector weights `q_α = tr(Q_α ρ)`. Non-negative and summing to one for
/// any state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerCoeffs {
    pub q: [f64; 4],
}

impl WernerCoeffs {
    /// Closed-form separability test inside the Werner family:
    /// q₂, q₃ ≤ 1/2, q₄ ≤ 1/4, q₄ ≤ q₂ and q₄ ≤ q₃ (q₁ ≤ 1 holds for any
    /// normalized weight vector).
    pub fn is_separable(&self) -> bool {
        self.violation_margin() <= CRITERIA_TOL
    }

    /// Largest amount by which any separability inequality is exceeded;
    /// non-positive for separable weight vectors.
    pub fn violation_margin(&self) -> f64 {
        let [q1, q2, q3, q4] = self.q;
        [q1 - 1.0, q2 - 0.5, q3 - 0.5, q4 - 0.25, q4 - q2, q4 - q3]
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn werner_coeffs(rho: &DensityOperator) -> WernerCoeffs {
    WernerCoeffs { q: coeffs_of(rho.matrix()) }
}

pub fn is_separable_werner(coeffs: &WernerCoeffs) -> bool {
    coeffs.is_separable()
}

fn coeffs_of(mat: &Operator) -> [f64; 4] {
    let projectors = InvariantProjectors::get().projectors();
    std::array::from_fn(|alpha| {
        let q = &projectors[alpha];
        let mut acc = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                acc += (q[(i, j)] * mat[(j, i)]).re;
            }
        }
        acc
    })
}

/// Twirling channel: projection onto the invariant subspace,
/// `τ[ρ] = Σ_α tr(Q_α ρ) Q_α / tr(Q_α)`. Linear, trace-preserving,
/// idempotent, self-dual, and PSD-preserving.
pub fn twirl(rho: &DensityOperator) -> DensityOperator {
    DensityOperator::unchecked(twirl_matrix(rho.matrix()))
}

/// The same channel on an arbitrary 16x16 operator (used, e.g., to twirl
/// witness operators).
pub fn twirl_operator(op: &Operator) -> Result<Operator> {
    if op.nrows() != DIM || op.ncols() != DIM {
        return Err(Error::ShapeMismatch { rows: op.nrows(), cols: op.ncols() });
    }
    Ok(twirl_matrix(op))
}

fn twirl_matrix(mat: &Operator) -> Operator {
    let basis = InvariantProjectors::get();
    let weights = coeffs_of(mat);
    let mut out = Operator::zeros(DIM, DIM);
    for alpha in 0..4 {
        out += &basis.projectors()[alpha] * Complex64::new(weights[alpha] / basis.ranks()[alpha], 0.0);
    }
    out
}

/// Separable Werner state: twirl of a random separable state.
pub fn sample_separable_werner<R: Rng>(rng: &mut R) -> DensityOperator {
    twirl(&sample_separable(rng))
}

/// Entangled Werner state by rejection: twirl a random four-qubit state and
/// keep it when the separability criteria are violated by more than 1e-6.
/// The ambient draw alternates 50/50 between Haar-random pure states and
/// Hilbert–Schmidt-random mixed states.
pub fn sample_entangled_werner<R: Rng>(rng: &mut R) -> Result<DensityOperator> {
    for _ in 0..REJECTION_CAP {
        let ambient = if rng.random::<bool>() {
            sample_haar_pure(rng)
        } else {
            sample_hs_mixed(rng)
        };
        let twirled = twirl_matrix(ambient.matrix());
        let coeffs = WernerCoeffs { q: coeffs_of(&twirled) };
        if coeffs.violation_margin() > VIOLATION_MARGIN {
            return Ok(DensityOperator::unchecked(twirled));
        }
    }
    Err(Error::SamplerExhausted { attempts: REJECTION_CAP })
}
