//! Random 2x2 Hermitian generators and the unitaries built from them.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Entry scale of the random generators, calibrated so that ε = 0.5 orbits
/// stay linearly detectable while ε = 1 orbits lose most of a witness's
/// recall. Comparable to the uniform(-1/2, 1/2) entries of the quantum
/// toolkits' stock random-Hermitian routine.
const GENERATOR_SCALE: f64 = 0.3;

/// Random 2x2 Hermitian matrix: centered-normal diagonal and off-diagonal
/// real/imaginary parts, entry scale [`GENERATOR_SCALE`]. Full rank with
/// probability 1.
pub fn random_hermitian_2<R: Rng>(rng: &mut R) -> Matrix2<Complex64> {
    let mut draw = || GENERATOR_SCALE * rng.sample::<f64, _>(StandardNormal);
    let d0 = draw();
    let d1 = draw();
    let re = draw();
    let im = draw();
    Matrix2::new(
        Complex64::new(d0, 0.0),
        Complex64::new(re, im),
        Complex64::new(re, -im),
        Complex64::new(d1, 0.0),
    )
}

/// `exp(iεH)` for a random Hermitian generator; exactly unitary, and exactly
/// the identity at ε = 0. Small ε keeps the rotation within ε‖H‖ of the
/// identity.
pub fn epsilon_unitary<R: Rng>(epsilon: f64, rng: &mut R) -> Matrix2<Complex64> {
    let h = random_hermitian_2(rng);
    epsilon_unitary_from_generator(&h, epsilon)
}

/// Closed-form `exp(iεH)` from the Pauli decomposition H = αI + m·σ:
/// `e^{iεα}(cos(εβ) I + i sin(εβ) m·σ/β)` with β = |m|.
pub fn epsilon_unitary_from_generator(h: &Matrix2<Complex64>, epsilon: f64) -> Matrix2<Complex64> {
    let alpha = (h[(0, 0)].re + h[(1, 1)].re) / 2.0;
    let mx = h[(0, 1)].re;
    let my = -h[(0, 1)].im;
    let mz = (h[(0, 0)].re - h[(1, 1)].re) / 2.0;
    let beta = (mx * mx + my * my + mz * mz).sqrt();

    let phase = Complex64::new(0.0, epsilon * alpha).exp();
    let angle = epsilon * beta;
    if angle == 0.0 {
        return Matrix2::identity() * phase;
    }
    let cos = Complex64::new(angle.cos(), 0.0);
    let is = Complex64::new(0.0, angle.sin() / beta);
    let m_sigma = Matrix2::new(
        Complex64::new(mz, 0.0),
        Complex64::new(mx, -my),
        Complex64::new(mx, my),
        Complex64::new(-mz, 0.0),
    );
    (Matrix2::identity() * cos + m_sigma * is) * phase
}

/// Haar-random 2x2 unitary: QR of a complex Ginibre matrix with the R
/// diagonal fixed real positive.
pub fn haar_unitary_2<R: Rng>(rng: &mut R) -> Matrix2<Complex64> {
    loop {
        let mut draw = || {
            Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        };
        let col0 = Vector2::new(draw(), draw());
        let col1 = Vector2::new(draw(), draw());

        let n0 = col0.norm();
        if n0 < 1e-12 {
            continue;
        }
        let q0 = col0 / Complex64::new(n0, 0.0);
        let overlap = q0.dotc(&col1);
        let residual = col1 - q0 * overlap;
        let n1 = residual.norm();
        if n1 < 1e-12 {
            continue;
        }
        let q1 = residual / Complex64::new(n1, 0.0);
        return Matrix2::from_columns(&[q0, q1]);
    }
}
