//! Random generation of SLOCC-family pure states, local unitaries and their
//! orbits, and separable mixed states.

mod families;
mod unitary;

pub use families::{slocc_state, FamilyParams, FamilyTag};
pub use unitary::{
    epsilon_unitary, epsilon_unitary_from_generator, haar_unitary_2, random_hermitian_2,
};

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::kron4;
use crate::pauli::{Operator, DIM};
use crate::state::{density_from_pure, DensityOperator, PureState};

const PARAM_RETRIES: usize = 100;

/// Product of four single-qubit unitaries.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary {
    factors: [Matrix2<Complex64>; 4],
}

impl LocalUnitary {
    pub fn new(factors: [Matrix2<Complex64>; 4]) -> Result<Self> {
        for factor in &factors {
            let gram = factor.adjoint() * factor;
            let dev = (gram - Matrix2::identity()).iter().map(|c| c.norm()).fold(0.0, f64::max);
            if dev > 1e-10 {
                return Err(Error::NotHermitian { deviation: dev });
            }
        }
        Ok(Self { factors })
    }

    pub fn identity() -> Self {
        Self { factors: [Matrix2::identity(); 4] }
    }

    /// Four independent ε-bounded unitaries `exp(iεH)`.
    pub fn random_epsilon<R: Rng>(epsilon: f64, rng: &mut R) -> Self {
        Self { factors: std::array::from_fn(|_| epsilon_unitary(epsilon, rng)) }
    }

    /// Four independent Haar-random unitaries.
    pub fn random_haar<R: Rng>(rng: &mut R) -> Self {
        Self { factors: std::array::from_fn(|_| haar_unitary_2(rng)) }
    }

    pub fn factors(&self) -> &[Matrix2<Complex64>; 4] {
        &self.factors
    }

    /// Full 16x16 matrix `U₁⊗U₂⊗U₃⊗U₄`.
    pub fn to_matrix(&self) -> Operator {
        kron4(&self.factors)
    }
}

/// How orbit unitaries are drawn when sampling a family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Orbit {
    /// `exp(iεH)` per qubit with random Hermitian generators.
    Epsilon(f64),
    /// Haar-random per qubit; the fully scrambled worst case.
    Haar,
}

impl Orbit {
    fn draw<R: Rng>(&self, rng: &mut R) -> LocalUnitary {
        match *self {
            Orbit::Epsilon(eps) => LocalUnitary::random_epsilon(eps, rng),
            Orbit::Haar => LocalUnitary::random_haar(rng),
        }
    }
}

/// Conjugation `UρU†` by a product of local unitaries. Preserves the
/// spectrum, hence purity and all entanglement labels.
pub fn local_orbit(rho: &DensityOperator, u: &LocalUnitary) -> DensityOperator {
    let m = u.to_matrix();
    DensityOperator::unchecked(&m * rho.matrix() * m.adjoint())
}

/// Density of one pure state of `tag`: random family parameters, the cited
/// ket, then an independent local orbit per qubit.
pub fn sample_family<R: Rng>(tag: FamilyTag, epsilon: f64, rng: &mut R) -> Result<DensityOperator> {
    sample_family_orbit(tag, Orbit::Epsilon(epsilon), rng)
}

pub fn sample_family_orbit<R: Rng>(
    tag: FamilyTag,
    orbit: Orbit,
    rng: &mut R,
) -> Result<DensityOperator> {
    for _ in 0..PARAM_RETRIES {
        let params = FamilyParams::random(tag, rng)?;
        let psi = match slocc_state(tag, &params) {
            Ok(psi) => psi,
            Err(Error::ZeroNorm) => continue,
            Err(e) => return Err(e),
        };
        let u = orbit.draw(rng);
        return Ok(local_orbit(&density_from_pure(&psi), &u));
    }
    Err(Error::RetriesExhausted { attempts: PARAM_RETRIES })
}

/// Amplitudes of `(U₁⊗U₂⊗U₃⊗U₄)|0000⟩`: a random pure product state.
fn factorized_amplitudes<R: Rng>(rng: &mut R) -> [Complex64; DIM] {
    let factors: [Matrix2<Complex64>; 4] = std::array::from_fn(|_| haar_unitary_2(rng));
    std::array::from_fn(|x| {
        (0..4).fold(Complex64::new(1.0, 0.0), |acc, q| acc * factors[q][((x >> (3 - q)) & 1, 0)])
    })
}

/// Random pure product state as a density operator.
pub fn sample_factorized<R: Rng>(rng: &mut R) -> DensityOperator {
    let amps = factorized_amplitudes(rng);
    density_from_pure(&PureState::new(amps).expect("Haar columns are unit vectors"))
}

/// Number of product states mixed into one separable sample; the
/// Carathéodory bound dim(H)² for a 16-dimensional state space.
pub const SEPARABLE_HULL_SIZE: usize = 256;

/// Random separable state: a convex hull of 256 Haar-random product states
/// with symmetric-Dirichlet weights.
pub fn sample_separable<R: Rng>(rng: &mut R) -> DensityOperator {
    let weights = dirichlet_uniform(SEPARABLE_HULL_SIZE, rng);
    let mut mat = Operator::zeros(DIM, DIM);
    for &w in &weights {
        let amps = factorized_amplitudes(rng);
        let wc = Complex64::new(w, 0.0);
        for i in 0..DIM {
            for j in 0..DIM {
                mat[(i, j)] += wc * amps[i] * amps[j].conj();
            }
        }
    }
    DensityOperator::unchecked(mat)
}

/// Symmetric Dirichlet(α = 1) weights via normalized Exp(1) draws.
fn dirichlet_uniform<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut weights: Vec<f64> = (0..n).map(|_| rng.sample(Exp1)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    weights
}

/// Haar-random pure state of the full 16-dimensional space.
pub fn sample_haar_pure<R: Rng>(rng: &mut R) -> DensityOperator {
    let amps: [Complex64; DIM] = std::array::from_fn(|_| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    density_from_pure(&PureState::new(amps).expect("Gaussian vector is nonzero a.s."))
}

/// Hilbert–Schmidt-random mixed state `GG†/tr(GG†)` from a 16x16 complex
/// Ginibre matrix. Full rank with probability 1.
pub fn sample_hs_mixed<R: Rng>(rng: &mut R) -> DensityOperator {
    let g = Operator::from_fn(DIM, DIM, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let mut mat = &g * g.adjoint();
    let trace = mat.trace();
    mat /= trace;
    DensityOperator::unchecked(mat)
}
