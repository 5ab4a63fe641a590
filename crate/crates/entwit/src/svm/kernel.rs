//! Dual soft-margin SVM with an RBF kernel, solved by sequential pairwise
//! optimization over the dual coefficients.
//!
//! Minimizes `½ aᵀQa - Σa` with `Q_nm = t_n t_m k(x_n, x_m)` under
//! `0 ≤ a_n ≤ C` and `Σ a_n t_n = 0`. Working pairs are chosen by maximal
//! violation with a second-order gain estimate; iteration stops once the
//! KKT residual drops below the tolerance.

use crate::error::{Error, Result};
use crate::par;
use crate::pauli::{PauliVector, N_FEATURES};
use crate::sampling::FamilyTag;
use crate::svm::{Decision, Label, LabeledSample};

/// RBF kernel `exp(-γ‖x - y‖²)`; symmetric, in (0, 1], and 1 on the
/// diagonal.
pub fn rbf_kernel(x: &PauliVector, y: &PauliVector, gamma: f64) -> f64 {
    (-gamma * x.squared_distance(y)).exp()
}

/// Kernel width from the median heuristic: `γ = 1/median(‖x - y‖²)` over a
/// subsample of pairs. Falls back to 1/256 for degenerate data.
pub fn median_heuristic_gamma(data: &[LabeledSample]) -> f64 {
    const MAX_POINTS: usize = 256;
    if data.len() < 2 {
        return 1.0 / N_FEATURES as f64;
    }
    let stride = data.len().div_ceil(MAX_POINTS);
    let points: Vec<&PauliVector> = data.iter().step_by(stride).map(|s| &s.features).collect();
    let mut dists = Vec::with_capacity(points.len() * (points.len() - 1) / 2);
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            dists.push(points[i].squared_distance(points[j]));
        }
    }
    dists.sort_by(|a, b| a.total_cmp(b));
    let median = dists[dists.len() / 2];
    if median > 1e-12 {
        1.0 / median
    } else {
        1.0 / N_FEATURES as f64
    }
}

/// Trained kernel classifier: support vectors, dual coefficients, labels,
/// kernel width, box bound and bias.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelModel {
    pub support_vectors: Vec<PauliVector>,
    pub dual_coeffs: Vec<f64>,
    pub labels: Vec<f64>,
    pub gamma: f64,
    pub c: f64,
    pub bias: f64,
    /// KKT violation at the last solver step; at most the stopping
    /// tolerance for a converged model.
    pub kkt_residual: f64,
    pub family: Option<FamilyTag>,
}

impl KernelModel {
    /// `f(x) = Σ a_n t_n k(x_n, x) + b`.
    pub fn decision_value(&self, features: &PauliVector) -> f64 {
        let kernel_sum: f64 = self
            .support_vectors
            .iter()
            .zip(self.dual_coeffs.iter().zip(self.labels.iter()))
            .map(|(sv, (a, t))| a * t * rbf_kernel(sv, features, self.gamma))
            .sum();
        kernel_sum + self.bias
    }
}

/// Solver knobs; the defaults implement the documented contract.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    /// Stop once the maximal KKT violation falls below this.
    pub kkt_tolerance: f64,
    /// Hard iteration cap; `None` scales with the training-set size.
    pub max_iterations: Option<usize>,
    /// Budget of the kernel-row cache.
    pub cache_bytes: usize,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self { kkt_tolerance: 1e-3, max_iterations: None, cache_bytes: 128 << 20 }
    }
}

pub fn train_kernel(data: &[LabeledSample], gamma: f64, c: f64) -> Result<KernelModel> {
    train_kernel_with(data, gamma, c, &KernelOptions::default())
}

pub fn train_kernel_with(
    data: &[LabeledSample],
    gamma: f64,
    c: f64,
    options: &KernelOptions,
) -> Result<KernelModel> {
    if data.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if !(gamma > 0.0) || !(c > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "kernel parameters must be positive (gamma = {gamma}, c = {c})"
        )));
    }
    let has_ent = data.iter().any(|s| s.label == Label::Entangled);
    let has_sep = data.iter().any(|s| s.label == Label::Separable);
    if !has_ent || !has_sep {
        return Err(Error::SingleClass);
    }

    let n = data.len();
    let labels: Vec<f64> = data.iter().map(|s| s.label.sign()).collect();
    let mut features = Vec::with_capacity(n * N_FEATURES);
    for s in data {
        features.extend_from_slice(s.features.coeffs());
    }
    let norms: Vec<f64> = data.iter().map(|s| s.features.norm_squared()).collect();

    let mut cache = RowCache::new(n, options.cache_bytes);
    let mut alpha = vec![0.0f64; n];
    // gradient of the dual objective; -1 everywhere at alpha = 0
    let mut grad = vec![-1.0f64; n];
    let max_iterations = options.max_iterations.unwrap_or_else(|| (100 * n).max(100_000));
    let tol = options.kkt_tolerance;
    let tau = 1e-12;

    let mut iterations = 0usize;
    let kkt_residual;
    loop {
        // i: maximal violation among the up-feasible set
        let mut m_val = f64::NEG_INFINITY;
        let mut i_best = usize::MAX;
        for t in 0..n {
            let in_up = (labels[t] > 0.0 && alpha[t] < c) || (labels[t] < 0.0 && alpha[t] > 0.0);
            if in_up {
                let v = -labels[t] * grad[t];
                if v > m_val {
                    m_val = v;
                    i_best = t;
                }
            }
        }
        if i_best == usize::MAX {
            kkt_residual = 0.0;
            break;
        }
        let slot_i = cache.ensure(i_best, None, &features, &norms, gamma);

        // j: best second-order gain among the low-feasible set
        let (mut min_m, mut best_gain, mut j_best) = (f64::INFINITY, 0.0, usize::MAX);
        {
            let row_i = cache.slot(slot_i);
            for t in 0..n {
                let in_low =
                    (labels[t] < 0.0 && alpha[t] < c) || (labels[t] > 0.0 && alpha[t] > 0.0);
                if !in_low {
                    continue;
                }
                let v = -labels[t] * grad[t];
                min_m = min_m.min(v);
                let b = m_val - v;
                if b > 0.0 {
                    let a = (2.0 - 2.0 * row_i[t]).max(tau);
                    let gain = b * b / a;
                    if gain > best_gain {
                        best_gain = gain;
                        j_best = t;
                    }
                }
            }
        }
        let gap = m_val - min_m;
        if gap <= tol || j_best == usize::MAX {
            kkt_residual = gap.max(0.0);
            break;
        }
        if iterations >= max_iterations {
            return Err(Error::Convergence { iterations, residual: gap });
        }
        iterations += 1;

        // step along the equality-preserving direction a_i += y_i d,
        // a_j -= y_j d, clipped to the box; both endpoints stay feasible
        let (i, j) = (i_best, j_best);
        let slot_j = cache.ensure(j, Some(slot_i), &features, &norms, gamma);
        let (a_ij, b_ij) = {
            let row_i = cache.slot(slot_i);
            ((2.0 - 2.0 * row_i[j]).max(tau), m_val - (-labels[j] * grad[j]))
        };
        let bound_i = if labels[i] > 0.0 { c - alpha[i] } else { alpha[i] };
        let bound_j = if labels[j] > 0.0 { alpha[j] } else { c - alpha[j] };
        let d = (b_ij / a_ij).min(bound_i).min(bound_j);
        if labels[i] > 0.0 {
            alpha[i] += d;
        } else {
            alpha[i] -= d;
        }
        if labels[j] > 0.0 {
            alpha[j] -= d;
        } else {
            alpha[j] += d;
        }

        let row_i = cache.slot(slot_i);
        let row_j = cache.slot(slot_j);
        for t in 0..n {
            grad[t] += labels[t] * d * (row_i[t] - row_j[t]);
        }
    }

    // bias from the free support vectors; fall back to the residual midpoint
    let mut b_sum = 0.0;
    let mut b_count = 0usize;
    for t in 0..n {
        if alpha[t] > 1e-8 * c && alpha[t] < c * (1.0 - 1e-8) {
            b_sum += -labels[t] * grad[t];
            b_count += 1;
        }
    }
    let bias = if b_count > 0 {
        b_sum / b_count as f64
    } else {
        let mut m_val = f64::NEG_INFINITY;
        let mut min_m = f64::INFINITY;
        for t in 0..n {
            let v = -labels[t] * grad[t];
            if (labels[t] > 0.0 && alpha[t] < c) || (labels[t] < 0.0 && alpha[t] > 0.0) {
                m_val = m_val.max(v);
            }
            if (labels[t] < 0.0 && alpha[t] < c) || (labels[t] > 0.0 && alpha[t] > 0.0) {
                min_m = min_m.min(v);
            }
        }
        (m_val + min_m) / 2.0
    };

    let mut support_vectors = Vec::new();
    let mut dual_coeffs = Vec::new();
    let mut sv_labels = Vec::new();
    for (t, &a) in alpha.iter().enumerate() {
        if a > 1e-10 {
            support_vectors.push(data[t].features.clone());
            dual_coeffs.push(a);
            sv_labels.push(labels[t]);
        }
    }

    let family = modal_entangled_family(data);
    Ok(KernelModel {
        support_vectors,
        dual_coeffs,
        labels: sv_labels,
        gamma,
        c,
        bias,
        kkt_residual,
        family,
    })
}

fn modal_entangled_family(data: &[LabeledSample]) -> Option<FamilyTag> {
    let mut counts = std::collections::HashMap::new();
    for s in data.iter().filter(|s| s.label == Label::Entangled) {
        *counts.entry(s.family).or_insert(0usize) += 1;
    }
    counts.into_iter().max_by_key(|&(tag, n)| (n, tag.as_byte())).map(|(tag, _)| tag)
}

/// Classifies a density operator with a trained kernel model.
pub fn predict_kernel(model: &KernelModel, rho: &crate::state::DensityOperator) -> Decision {
    Decision::from_value(model.decision_value(&rho.features()))
}

/// FIFO cache of kernel rows, each row computed block-parallel.
struct RowCache {
    n: usize,
    cap: usize,
    slots: Vec<(usize, Vec<f64>)>,
    slot_of: Vec<usize>,
    next_evict: usize,
}

const NO_SLOT: usize = usize::MAX;

impl RowCache {
    fn new(n: usize, cache_bytes: usize) -> Self {
        let cap = (cache_bytes / (8 * n)).clamp(8, n.max(8));
        Self { n, cap, slots: Vec::with_capacity(cap), slot_of: vec![NO_SLOT; n], next_evict: 0 }
    }

    /// Returns the slot holding row `i`, computing it on a miss. A pinned
    /// slot is never evicted.
    fn ensure(
        &mut self,
        i: usize,
        pin: Option<usize>,
        features: &[f64],
        norms: &[f64],
        gamma: f64,
    ) -> usize {
        if self.slot_of[i] != NO_SLOT {
            return self.slot_of[i];
        }
        let row = compute_row(i, self.n, features, norms, gamma);
        let slot = if self.slots.len() < self.cap {
            self.slots.push((i, row));
            self.slots.len() - 1
        } else {
            let mut slot = self.next_evict;
            if Some(slot) == pin {
                slot = (slot + 1) % self.slots.len();
            }
            self.next_evict = (slot + 1) % self.slots.len();
            self.slot_of[self.slots[slot].0] = NO_SLOT;
            self.slots[slot] = (i, row);
            slot
        };
        self.slot_of[i] = slot;
        slot
    }

    fn slot(&self, slot: usize) -> &[f64] {
        &self.slots[slot].1[..]
    }
}

fn compute_row(i: usize, n: usize, features: &[f64], norms: &[f64], gamma: f64) -> Vec<f64> {
    const BLOCK: usize = 512;
    let xi = &features[i * N_FEATURES..(i + 1) * N_FEATURES];
    let blocks = par::map_indexed(n.div_ceil(BLOCK), |b| {
        let lo = b * BLOCK;
        let hi = ((b + 1) * BLOCK).min(n);
        let mut out = Vec::with_capacity(hi - lo);
        for j in lo..hi {
            let xj = &features[j * N_FEATURES..(j + 1) * N_FEATURES];
            let dot: f64 = xi.iter().zip(xj.iter()).map(|(a, b)| a * b).sum();
            let d2 = (norms[i] + norms[j] - 2.0 * dot).max(0.0);
            out.push((-gamma * d2).exp());
        }
        out
    });
    blocks.concat()
}
