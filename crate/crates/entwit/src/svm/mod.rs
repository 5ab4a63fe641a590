//! Support-vector classifiers over Pauli feature vectors: linear witnesses
//! and RBF-kernel models.

mod eval;
mod kernel;
mod linear;

pub use eval::{evaluate, Confusion, Histogram, Report};
pub use kernel::{
    median_heuristic_gamma, predict_kernel, rbf_kernel, train_kernel, train_kernel_with,
    KernelModel, KernelOptions,
};
pub use linear::{
    batch_gradient, batch_objective, calibrate_witness, hinge_loss, normalize_witness,
    train_linear,
};

use crate::error::{Error, Result};
use crate::linalg;
use crate::pauli::{devectorize, PauliVector};
use crate::sampling::FamilyTag;
use crate::state::DensityOperator;

/// Binary class of a sample: separable states are the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Entangled,
    Separable,
}

impl Label {
    /// The target value t ∈ {-1, +1}.
    pub fn sign(self) -> f64 {
        match self {
            Label::Entangled => -1.0,
            Label::Separable => 1.0,
        }
    }

    pub fn from_sign(value: f64) -> Self {
        if value < 0.0 {
            Label::Entangled
        } else {
            Label::Separable
        }
    }
}

/// One training or evaluation record: features, source family, class.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub features: PauliVector,
    pub family: FamilyTag,
    pub label: Label,
}

impl LabeledSample {
    /// The label is derived from the family so the two can never disagree.
    pub fn new(features: PauliVector, family: FamilyTag) -> Self {
        Self { features, label: family.label(), family }
    }
}

/// Provenance of a trained witness.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WitnessMeta {
    pub family: Option<FamilyTag>,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
}

/// Entanglement witness: a Hermitian operator stored as a Pauli vector,
/// scaled so its largest absolute eigenvalue is 1 and therefore
/// `|tr(ρW)| ≤ 1` for every state ρ.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    w: PauliVector,
    pub meta: WitnessMeta,
}

impl Witness {
    /// Normalizes `w` by the largest absolute eigenvalue of its operator.
    pub fn from_vector(w: &PauliVector) -> Result<Self> {
        let spectral = linalg::max_abs_eigenvalue(&devectorize(w)?);
        if spectral <= 1e-300 {
            return Err(Error::ZeroNorm);
        }
        Ok(Self { w: w.scale(1.0 / spectral), meta: WitnessMeta::default() })
    }

    /// Wraps a vector that is already spectrally normalized (e.g. loaded
    /// from a model file) without rescaling it.
    pub(crate) fn from_normalized(w: PauliVector) -> Self {
        Self { w, meta: WitnessMeta::default() }
    }

    pub fn coefficients(&self) -> &PauliVector {
        &self.w
    }

    pub fn with_meta(mut self, meta: WitnessMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn decide(&self, rho: &DensityOperator) -> Decision {
        linear_decision(&self.w, &rho.features())
    }

    pub fn decision_value(&self, features: &PauliVector) -> f64 {
        self.w.dot(features)
    }
}

/// Outcome of a decision function: the raw value, the assigned label, and
/// whether the value sat exactly on the boundary (a tie broken toward the
/// separable class).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub value: f64,
    pub label: Label,
    pub on_boundary: bool,
}

impl Decision {
    pub fn from_value(value: f64) -> Self {
        Self { value, label: Label::from_sign(value), on_boundary: value == 0.0 }
    }
}

/// Linear decision functional `f(w, ρ) = (w, ρ⃗) = tr(Ŵρ̂)`.
pub fn linear_decision(w: &PauliVector, features: &PauliVector) -> Decision {
    Decision::from_value(w.dot(features))
}

/// Evaluates a witness on a state: value plus ±1 label.
pub fn decision(w: &Witness, rho: &DensityOperator) -> Decision {
    w.decide(rho)
}

/// A trained classifier of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Linear(Witness),
    Rbf(KernelModel),
}

impl Model {
    pub fn decision_value(&self, features: &PauliVector) -> f64 {
        match self {
            Model::Linear(w) => w.decision_value(features),
            Model::Rbf(m) => m.decision_value(features),
        }
    }

    pub fn classify(&self, features: &PauliVector) -> Decision {
        Decision::from_value(self.decision_value(features))
    }

    pub fn family(&self) -> Option<FamilyTag> {
        match self {
            Model::Linear(w) => w.meta.family,
            Model::Rbf(m) => m.family,
        }
    }
}

/// Hyperparameters of the linear trainer. Defaults: λ = 0.5e-4, learning
/// rate 0.005, optimizer epsilon 1e-6, 20000 epochs, batch size 50.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub lambda: f64,
    pub learning_rate: f64,
    pub adam_epsilon: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            lambda: 0.5e-4,
            learning_rate: 0.005,
            adam_epsilon: 1e-6,
            epochs: 20_000,
            batch_size: 50,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda", self.lambda),
            ("learning_rate", self.learning_rate),
            ("adam_epsilon", self.adam_epsilon),
            ("epochs", self.epochs as f64),
            ("batch_size", self.batch_size as f64),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {value}")));
            }
        }
        Ok(())
    }
}
