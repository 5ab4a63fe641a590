//! Model files: JSON with training metadata plus either the witness vector
//! or the kernel model's support set.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{PauliVector, N_FEATURES};
use crate::sampling::FamilyTag;
use crate::svm::{KernelModel, Model, Witness, WitnessMeta};

pub const MODEL_EXTENSION: &str = "json";

/// Provenance written next to every trained model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMeta {
    pub family: String,
    pub epsilon: Option<f64>,
    pub orbit: String,
    pub seed: u64,
    pub config_hash: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ModelFile {
    Linear {
        meta: ModelMeta,
        weights: Vec<f64>,
    },
    Rbf {
        meta: ModelMeta,
        gamma: f64,
        c: f64,
        bias: f64,
        kkt_residual: f64,
        dual_coeffs: Vec<f64>,
        labels: Vec<f64>,
        support_vectors: Vec<Vec<f64>>,
    },
}

pub fn save_model(path: &Path, model: &Model, meta: &ModelMeta) -> Result<()> {
    let file = match model {
        Model::Linear(witness) => ModelFile::Linear {
            meta: meta.clone(),
            weights: witness.coefficients().coeffs().to_vec(),
        },
        Model::Rbf(kernel) => ModelFile::Rbf {
            meta: meta.clone(),
            gamma: kernel.gamma,
            c: kernel.c,
            bias: kernel.bias,
            kkt_residual: kernel.kkt_residual,
            dual_coeffs: kernel.dual_coeffs.clone(),
            labels: kernel.labels.clone(),
            support_vectors: kernel
                .support_vectors
                .iter()
                .map(|sv| sv.coeffs().to_vec())
                .collect(),
        },
    };
    let json = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::Malformed { what: "model file", detail: e.to_string() })?;
    std::fs::write(path, json)?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<(Model, ModelMeta)> {
    let text = std::fs::read_to_string(path)?;
    let file: ModelFile = serde_json::from_str(&text)
        .map_err(|e| Error::Malformed { what: "model file", detail: e.to_string() })?;
    match file {
        ModelFile::Linear { meta, weights } => {
            let coeffs = vec_to_coeffs(weights)?;
            // the stored vector is already spectrally normalized
            let witness = Witness::from_normalized(PauliVector::new(coeffs)?).with_meta(WitnessMeta {
                family: parse_family(&meta.family),
                epsilon: meta.epsilon,
                seed: Some(meta.seed),
            });
            Ok((Model::Linear(witness), meta))
        }
        ModelFile::Rbf { meta, gamma, c, bias, kkt_residual, dual_coeffs, labels, support_vectors } => {
            if dual_coeffs.len() != labels.len() || dual_coeffs.len() != support_vectors.len() {
                return Err(Error::Malformed {
                    what: "model file",
                    detail: "support set arrays disagree in length".into(),
                });
            }
            let svs = support_vectors
                .into_iter()
                .map(|sv| Ok(PauliVector::new(vec_to_coeffs(sv)?)?))
                .collect::<Result<Vec<_>>>()?;
            let kernel = KernelModel {
                support_vectors: svs,
                dual_coeffs,
                labels,
                gamma,
                c,
                bias,
                kkt_residual,
                family: parse_family(&meta.family),
            };
            Ok((Model::Rbf(kernel), meta))
        }
    }
}

fn parse_family(name: &str) -> Option<FamilyTag> {
    name.parse().ok()
}

fn vec_to_coeffs(v: Vec<f64>) -> Result<[f64; N_FEATURES]> {
    <[f64; N_FEATURES]>::try_from(v).map_err(|v: Vec<f64>| Error::Malformed {
        what: "model file",
        detail: format!("expected {N_FEATURES} coefficients, found {}", v.len()),
    })
}
