//! Experiment configuration: defaults, validation, and the `key = value`
//! text form mirrored by the CLI flags.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::pauli::N_FEATURES;
use crate::sampling::{FamilyTag, Orbit};
use crate::svm::TrainConfig;

/// Train/validation/test partition of one class's samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub train: usize,
    pub validation: usize,
    pub test: usize,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self { train: 18_000, validation: 1_000, test: 1_000 }
    }
}

impl SplitSpec {
    pub fn total(&self) -> usize {
        self.train + self.validation + self.test
    }
}

/// Everything a full experiment needs; each CLI command reads the part it
/// uses.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub families: Vec<FamilyTag>,
    pub samples_per_family: usize,
    pub orbit: Orbit,
    pub split: SplitSpec,
    pub train: TrainConfig,
    pub gamma: f64,
    pub c: f64,
    pub out_dir: PathBuf,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            families: vec![FamilyTag::G, FamilyTag::Sep],
            samples_per_family: 20_000,
            orbit: Orbit::Epsilon(0.5),
            split: SplitSpec::default(),
            train: TrainConfig::default(),
            gamma: 1.0 / N_FEATURES as f64,
            c: 1.0,
            out_dir: PathBuf::from("."),
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.families.is_empty() {
            return Err(Error::InvalidConfig("no families requested".into()));
        }
        if self.samples_per_family == 0 {
            return Err(Error::InvalidConfig("samples_per_family must be positive".into()));
        }
        if self.split.train == 0 || self.split.validation == 0 || self.split.test == 0 {
            return Err(Error::InvalidConfig("all split sizes must be positive".into()));
        }
        if self.split.total() != self.samples_per_family {
            return Err(Error::InvalidConfig(format!(
                "split sizes {}+{}+{} must sum to samples_per_family = {}",
                self.split.train, self.split.validation, self.split.test, self.samples_per_family
            )));
        }
        if let Orbit::Epsilon(e) = self.orbit {
            if !(e >= 0.0) {
                return Err(Error::InvalidConfig(format!("epsilon must be non-negative, got {e}")));
            }
        }
        if !(self.gamma > 0.0) || !(self.c > 0.0) {
            return Err(Error::InvalidConfig("gamma and c must be positive".into()));
        }
        self.train.validate()
    }
}

/// Parses `key = value` lines; `#` starts a comment, blank lines are
/// skipped, later keys win.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Malformed {
                what: "config file",
                detail: format!("line {} has no '=': {raw:?}", lineno + 1),
            });
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Renders a map back to the canonical `key = value` text form.
pub fn format_kv(map: &BTreeMap<String, String>) -> String {
    let mut out = String::new();
    for (key, value) in map {
        out.push_str(key);
        out.push_str(" = ");
        out.push_str(value);
        out.push('\n');
    }
    out
}

/// Stable fingerprint of a canonical config rendering (FNV-1a, 64-bit).
pub fn config_fingerprint(map: &BTreeMap<String, String>) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in format_kv(map).bytes() {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x1000_0000_01b3);
    }
    format!("{hash:016x}")
}
