//! Linear witness training: hinge loss minimized by adaptive-moment
//! mini-batch descent.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::pauli::{PauliVector, N_FEATURES};
use crate::svm::{Label, LabeledSample, TrainConfig, Witness, WitnessMeta};

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;

/// Hinge error `Σ_j max(0, 1 - f_j t_j) + λ‖w‖²` summed over the batch.
pub fn hinge_loss(w: &PauliVector, batch: &[LabeledSample], lambda: f64) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let hinge: f64 = batch
        .iter()
        .map(|s| (1.0 - w.dot(&s.features) * s.label.sign()).max(0.0))
        .sum();
    Ok(hinge + lambda * w.norm_squared())
}

/// The trainer's objective: mean hinge term plus λ‖w‖², so λ carries the
/// same weight at any batch size.
pub fn batch_objective(w: &PauliVector, batch: &[LabeledSample], lambda: f64) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let hinge: f64 = batch
        .iter()
        .map(|s| (1.0 - w.dot(&s.features) * s.label.sign()).max(0.0))
        .sum();
    Ok(hinge / batch.len() as f64 + lambda * w.norm_squared())
}

/// Subgradient of [`batch_objective`]; the flat side is used at hinge kinks.
pub fn batch_gradient(w: &PauliVector, batch: &[LabeledSample], lambda: f64) -> Result<PauliVector> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let mut grad = [0.0; N_FEATURES];
    let scale = 1.0 / batch.len() as f64;
    for sample in batch {
        let t = sample.label.sign();
        if 1.0 - w.dot(&sample.features) * t > 0.0 {
            let x = sample.features.coeffs();
            for (g, xi) in grad.iter_mut().zip(x.iter()) {
                *g -= t * xi * scale;
            }
        }
    }
    for (g, wi) in grad.iter_mut().zip(w.coeffs().iter()) {
        *g += 2.0 * lambda * wi;
    }
    PauliVector::new(grad)
}

/// Trains a linear witness: one random batch (with replacement) per epoch,
/// adaptive-moment updates, then spectral normalization. Deterministic for a
/// fixed seed.
pub fn train_linear(data: &[LabeledSample], cfg: &TrainConfig) -> Result<Witness> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let has_ent = data.iter().any(|s| s.label == Label::Entangled);
    let has_sep = data.iter().any(|s| s.label == Label::Separable);
    if !has_ent || !has_sep {
        return Err(Error::SingleClass);
    }

    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let mut w = [0.0f64; N_FEATURES];
    let mut m = [0.0f64; N_FEATURES];
    let mut v = [0.0f64; N_FEATURES];
    let mut grad = [0.0f64; N_FEATURES];
    let batch_scale = 1.0 / cfg.batch_size as f64;

    for epoch in 0..cfg.epochs {
        grad.fill(0.0);
        for _ in 0..cfg.batch_size {
            let sample = &data[rng.random_range(0..data.len())];
            let t = sample.label.sign();
            let x = sample.features.coeffs();
            let f: f64 = w.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
            if 1.0 - f * t > 0.0 {
                for (g, xi) in grad.iter_mut().zip(x.iter()) {
                    *g -= t * xi * batch_scale;
                }
            }
        }
        for (g, wi) in grad.iter_mut().zip(w.iter()) {
            *g += 2.0 * cfg.lambda * wi;
        }

        let step = epoch as f64 + 1.0;
        let m_corr = 1.0 - BETA1.powf(step);
        let v_corr = 1.0 - BETA2.powf(step);
        for k in 0..N_FEATURES {
            m[k] = BETA1 * m[k] + (1.0 - BETA1) * grad[k];
            v[k] = BETA2 * v[k] + (1.0 - BETA2) * grad[k] * grad[k];
            let m_hat = m[k] / m_corr;
            let v_hat = v[k] / v_corr;
            w[k] -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.adam_epsilon);
        }
    }

    let witness = normalize_witness(&PauliVector::new(w)?)?;
    let family = modal_entangled_family(data);
    Ok(witness.with_meta(WitnessMeta { family, epsilon: None, seed: Some(cfg.seed) }))
}

fn modal_entangled_family(data: &[LabeledSample]) -> Option<crate::sampling::FamilyTag> {
    let mut counts = std::collections::HashMap::new();
    for s in data.iter().filter(|s| s.label == Label::Entangled) {
        *counts.entry(s.family).or_insert(0usize) += 1;
    }
    counts.into_iter().max_by_key(|&(tag, n)| (n, tag.as_byte())).map(|(tag, _)| tag)
}

/// Scales a weight vector by the largest absolute eigenvalue of its operator
/// so every decision value lands in [-1, 1]. Labels are unchanged.
pub fn normalize_witness(w: &PauliVector) -> Result<Witness> {
    Witness::from_vector(w)
}

/// Validation-tuned margin shift `W → W + δI`.
///
/// A max-margin boundary sits halfway between the entangled cloud and the
/// separable samples; adding a multiple of the identity slides it toward the
/// entangled side so the witness stays silent on states outside the trained
/// family. δ is `kappa` times the 99th-percentile decision value of the
/// entangled validation samples (their values are negative), so at most
/// about 1% of validation recall is spent. The result is re-normalized.
pub fn calibrate_witness(
    witness: &Witness,
    validation: &[LabeledSample],
    kappa: f64,
) -> Result<Witness> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::InvalidConfig(format!("kappa must lie in [0, 1], got {kappa}")));
    }
    let mut values: Vec<f64> = validation
        .iter()
        .filter(|s| s.label == Label::Entangled)
        .map(|s| witness.decision_value(&s.features))
        .collect();
    if values.is_empty() {
        return Ok(witness.clone());
    }
    values.sort_by(f64::total_cmp);
    let q99 = values[((values.len() - 1) as f64 * 0.99) as usize];
    let delta = kappa * (-q99).max(0.0);
    if delta == 0.0 {
        return Ok(witness.clone());
    }
    let mut w = witness.coefficients().clone();
    // E₀ = I/4, so shifting every decision value by δ means w₀ += 4δ
    w.coeffs_mut()[0] += 4.0 * delta;
    Ok(normalize_witness(&w)?.with_meta(witness.meta))
}
