//! Generation, training, evaluation and classification entry points used by
//! the CLI.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::par;
use crate::pipeline::config::{config_fingerprint, ExperimentConfig, SplitSpec};
use crate::pipeline::dataset::{Dataset, DATASET_EXTENSION};
use crate::pipeline::model::{load_model, save_model, ModelMeta, MODEL_EXTENSION};
use crate::pipeline::report::{
    report_entries, write_histogram, write_metrics, write_score_table, ScoreRow,
};
use crate::pipeline::statefile::read_state_file;
use crate::rng::RootSeed;
use crate::sampling::{sample_factorized, sample_family_orbit, sample_separable, FamilyTag, Orbit};
use crate::state::DensityOperator;
use crate::svm::{
    calibrate_witness, evaluate, median_heuristic_gamma, train_kernel, train_linear, Label,
    LabeledSample, Model, Report, TrainConfig, Witness, WitnessMeta,
};
use crate::werner::{sample_entangled_werner, sample_separable_werner};

pub const HISTOGRAM_BINS: usize = 75;

/// Strength of the validation margin shift applied to linear witnesses.
pub const MARGIN_KAPPA: f64 = 0.5;

/// Domain bytes keeping the RNG streams of different commands disjoint.
const DOMAIN_GEN: u64 = 0x47;
const DOMAIN_SWEEP: u64 = 0x53;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Linear,
    Rbf,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Linear => "linear",
            ModelKind::Rbf => "rbf",
        })
    }
}

/// Kernel width: fixed, or tuned by the median heuristic on the training
/// split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaSpec {
    Fixed(f64),
    Median,
}

fn draw_sample<R: rand::Rng>(tag: FamilyTag, orbit: Orbit, rng: &mut R) -> Result<DensityOperator> {
    match tag {
        FamilyTag::Sep => Ok(draw_separable_class(rng)),
        FamilyTag::WernerSep => Ok(sample_separable_werner(rng)),
        FamilyTag::WernerEnt => sample_entangled_werner(rng),
        slocc => sample_family_orbit(slocc, orbit, rng),
    }
}

/// The separable class mixes convex hulls with pure factorized states and
/// twirled hulls (1:2:1). Hulls alone cluster near the maximally mixed
/// state; the factorized extreme points and the Werner-separable states pin
/// the trained witnesses against the far boundary of the separable set,
/// which is what keeps them silent on scrambled and twirled states.
fn draw_separable_class<R: rand::Rng>(rng: &mut R) -> DensityOperator {
    match rng.random_range(0..4u8) {
        0 => sample_separable(rng),
        1 | 2 => sample_factorized(rng),
        _ => sample_separable_werner(rng),
    }
}

/// Generates `count` labeled samples of one family, one RNG substream per
/// sample so the result is independent of evaluation order.
pub fn generate_samples(
    tag: FamilyTag,
    count: usize,
    orbit: Orbit,
    seed: u64,
) -> Result<Vec<LabeledSample>> {
    generate_samples_in_domain(DOMAIN_GEN, tag, count, orbit, seed)
}

fn generate_samples_in_domain(
    domain: u64,
    tag: FamilyTag,
    count: usize,
    orbit: Orbit,
    seed: u64,
) -> Result<Vec<LabeledSample>> {
    let root = RootSeed(seed);
    let results = par::map_indexed(count, |i| {
        let mut rng = root.substream((domain << 8) | tag.as_byte() as u64, i as u64);
        draw_sample(tag, orbit, &mut rng).map(|rho| LabeledSample::new(rho.features(), tag))
    });
    results.into_iter().collect()
}

/// Writes one dataset file per requested family; returns the paths.
pub fn generate_datasets(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.out_dir)?;
    let mut paths = Vec::new();
    for &tag in &cfg.families {
        let samples = generate_samples(tag, cfg.samples_per_family, cfg.orbit, cfg.seed)?;
        let dataset = Dataset::new(samples, cfg.seed, cfg.orbit);
        let path = Dataset::path_for(&cfg.out_dir, tag);
        dataset.write_to(&path)?;
        paths.push(path);
    }
    Ok(paths)
}

fn read_dataset(path: &Path) -> Result<Dataset> {
    Dataset::read_from(path).map_err(|e| match e {
        Error::Io(io) => {
            Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display())))
        }
        other => other,
    })
}

/// Training request resolved from flags and config files.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainRequest {
    pub data_dir: PathBuf,
    pub family: FamilyTag,
    pub kind: ModelKind,
    pub split: SplitSpec,
    pub train: TrainConfig,
    pub gamma: GammaSpec,
    pub c: f64,
    pub out: PathBuf,
}

#[derive(Debug)]
pub struct TrainOutcome {
    pub model: Model,
    pub model_path: PathBuf,
    pub metrics_path: PathBuf,
    pub validation: Report,
    pub test: Report,
}

struct ClassSplits {
    train: Vec<LabeledSample>,
    validation: Vec<LabeledSample>,
    test: Vec<LabeledSample>,
}

fn split_class(samples: Vec<LabeledSample>, split: &SplitSpec) -> ClassSplits {
    let mut iter = samples.into_iter();
    let train = iter.by_ref().take(split.train).collect();
    let validation = iter.by_ref().take(split.validation).collect();
    let test = iter.take(split.test).collect();
    ClassSplits { train, validation, test }
}

/// Trains one model for `family` against its separable counterpart, scores
/// the validation and test splits, and writes the model and metrics files.
pub fn run_training(req: &TrainRequest) -> Result<TrainOutcome> {
    if req.family.label() == Label::Separable {
        return Err(Error::InvalidConfig(format!(
            "family {} is separable; train against an entangled family",
            req.family
        )));
    }
    let counterpart =
        if req.family == FamilyTag::WernerEnt { FamilyTag::WernerSep } else { FamilyTag::Sep };

    let ent = read_dataset(&Dataset::path_for(&req.data_dir, req.family))?;
    let sep = read_dataset(&Dataset::path_for(&req.data_dir, counterpart))?;
    for (name, ds) in [(req.family, &ent), (counterpart, &sep)] {
        if ds.samples.len() != req.split.total() {
            return Err(Error::InvalidConfig(format!(
                "dataset {name} holds {} samples but the split needs {}",
                ds.samples.len(),
                req.split.total()
            )));
        }
    }
    let orbit = ent.header.orbit;

    let ent_splits = split_class(ent.samples, &req.split);
    let sep_splits = split_class(sep.samples, &req.split);
    let mut train_set = ent_splits.train;
    train_set.extend(sep_splits.train);
    let mut validation_set = ent_splits.validation;
    validation_set.extend(sep_splits.validation);
    let mut test_set = ent_splits.test;
    test_set.extend(sep_splits.test);

    let gamma = match req.gamma {
        GammaSpec::Fixed(g) => g,
        GammaSpec::Median => median_heuristic_gamma(&train_set),
    };
    let model = match req.kind {
        ModelKind::Linear => {
            let witness = train_linear(&train_set, &req.train)?;
            let witness = calibrate_witness(&witness, &validation_set, MARGIN_KAPPA)?;
            let epsilon = match orbit {
                Orbit::Epsilon(e) => Some(e),
                Orbit::Haar => None,
            };
            Model::Linear(witness.with_meta(WitnessMeta {
                family: Some(req.family),
                epsilon,
                seed: Some(req.train.seed),
            }))
        }
        ModelKind::Rbf => Model::Rbf(train_kernel(&train_set, gamma, req.c)?),
    };

    let validation = evaluate(&model, &validation_set, HISTOGRAM_BINS)?;
    let test = evaluate(&model, &test_set, HISTOGRAM_BINS)?;

    let config_hash = config_fingerprint(&request_kv(req, gamma));
    let meta = ModelMeta {
        family: req.family.to_string(),
        epsilon: match orbit {
            Orbit::Epsilon(e) => Some(e),
            Orbit::Haar => None,
        },
        orbit: match orbit {
            Orbit::Epsilon(_) => "epsilon".into(),
            Orbit::Haar => "haar".into(),
        },
        seed: req.train.seed,
        config_hash: config_hash.clone(),
    };
    if let Some(parent) = req.out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    save_model(&req.out, &model, &meta)?;

    let metrics_path = req.out.with_extension("metrics");
    let mut entries = vec![
        ("family".to_string(), req.family.to_string()),
        ("kind".to_string(), req.kind.to_string()),
        ("gamma".to_string(), gamma.to_string()),
        ("c".to_string(), req.c.to_string()),
        ("lambda".to_string(), req.train.lambda.to_string()),
        ("seed".to_string(), req.train.seed.to_string()),
        ("config_hash".to_string(), config_hash),
    ];
    entries.extend(report_entries("validation", &validation));
    entries.extend(report_entries("test", &test));
    write_metrics(&metrics_path, &entries)?;

    Ok(TrainOutcome { model, model_path: req.out.clone(), metrics_path, validation, test })
}

fn request_kv(req: &TrainRequest, gamma: f64) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("family".into(), req.family.to_string()),
        ("model".into(), req.kind.to_string()),
        ("split".into(), format!("{},{},{}", req.split.train, req.split.validation, req.split.test)),
        ("lambda".into(), req.train.lambda.to_string()),
        ("lr".into(), req.train.learning_rate.to_string()),
        ("adam_epsilon".into(), req.train.adam_epsilon.to_string()),
        ("epochs".into(), req.train.epochs.to_string()),
        ("batch".into(), req.train.batch_size.to_string()),
        ("seed".into(), req.train.seed.to_string()),
        ("gamma".into(), gamma.to_string()),
        ("c".into(), req.c.to_string()),
    ])
}

#[derive(Debug)]
pub struct EvalOutcome {
    pub score_path: PathBuf,
    pub histogram_path: PathBuf,
    pub rows: Vec<ScoreRow>,
}

fn orbit_label(orbit: Orbit) -> String {
    match orbit {
        Orbit::Epsilon(e) => e.to_string(),
        Orbit::Haar => "haar".into(),
    }
}

/// Scores a saved model against every dataset in a directory and writes the
/// per-family table plus one aggregated decision histogram.
pub fn run_eval(model_path: &Path, data_dir: &Path, bins: usize, out_dir: &Path) -> Result<EvalOutcome> {
    let (model, _meta) = load_model(model_path)?;
    let mut dataset_paths: Vec<PathBuf> = std::fs::read_dir(data_dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some(DATASET_EXTENSION))
        .collect();
    dataset_paths.sort();
    if dataset_paths.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "no .{DATASET_EXTENSION} datasets in {}",
            data_dir.display()
        )));
    }

    let mut rows = Vec::new();
    let mut all_samples = Vec::new();
    for path in &dataset_paths {
        let dataset = read_dataset(path)?;
        let report = evaluate(&model, &dataset.samples, bins)?;
        let family = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("unknown")
            .to_string();
        rows.push(ScoreRow {
            family,
            epsilon: orbit_label(dataset.header.orbit),
            recall: report.entangled_recall,
            specificity: report.separable_specificity,
            n: dataset.samples.len() as u64,
        });
        all_samples.extend(dataset.samples);
    }
    let combined = evaluate(&model, &all_samples, bins)?;

    std::fs::create_dir_all(out_dir)?;
    let stem = model_path.file_stem().and_then(|s| s.to_str()).unwrap_or("model");
    let score_path = out_dir.join(format!("{stem}_scores.tsv"));
    let histogram_path = out_dir.join(format!("{stem}_histogram.tsv"));
    write_score_table(&score_path, &rows)?;
    write_histogram(&histogram_path, &combined.histogram)?;
    Ok(EvalOutcome { score_path, histogram_path, rows })
}

/// Re-scores saved witnesses on freshly sampled orbits of their own family
/// at each ε (plus, optionally, fully Haar-random orbits), with a fresh
/// separable set for specificity.
pub fn sweep_epsilon(
    model_dir: &Path,
    epsilons: &[f64],
    include_haar: bool,
    count: usize,
    seed: u64,
    out_dir: &Path,
) -> Result<(PathBuf, Vec<ScoreRow>)> {
    if count == 0 {
        return Err(Error::InvalidConfig("sweep needs a positive sample count".into()));
    }
    let mut model_paths: Vec<PathBuf> = std::fs::read_dir(model_dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some(MODEL_EXTENSION))
        .collect();
    model_paths.sort();
    if model_paths.is_empty() {
        return Err(Error::InvalidConfig(format!("no models in {}", model_dir.display())));
    }

    let mut orbits: Vec<Orbit> = epsilons.iter().map(|&e| Orbit::Epsilon(e)).collect();
    if include_haar {
        orbits.push(Orbit::Haar);
    }

    let mut rows = Vec::new();
    for path in &model_paths {
        let (model, _meta) = load_model(path)?;
        let family = model.family().ok_or_else(|| {
            Error::InvalidConfig(format!("model {} carries no family tag", path.display()))
        })?;
        let sep_samples = generate_samples_in_domain(
            DOMAIN_SWEEP,
            FamilyTag::Sep,
            count,
            Orbit::Epsilon(0.0),
            seed,
        )?;
        let sep_report = evaluate(&model, &sep_samples, HISTOGRAM_BINS)?;
        for (k, &orbit) in orbits.iter().enumerate() {
            let domain = (DOMAIN_SWEEP << 8) | (k as u64 + 1);
            let samples = generate_samples_in_domain(domain, family, count, orbit, seed)?;
            let report = evaluate(&model, &samples, HISTOGRAM_BINS)?;
            rows.push(ScoreRow {
                family: family.to_string(),
                epsilon: orbit_label(orbit),
                recall: report.entangled_recall,
                specificity: sep_report.separable_specificity,
                n: count as u64,
            });
        }
    }

    std::fs::create_dir_all(out_dir)?;
    let table_path = out_dir.join("sweep.tsv");
    write_score_table(&table_path, &rows)?;
    Ok((table_path, rows))
}

/// One model's verdict on a state supplied by the user.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyRow {
    pub name: String,
    pub kind: ModelKind,
    pub family: Option<FamilyTag>,
    pub value: f64,
    pub label: Label,
}

/// Evaluates every model in a directory on a state file. The state must
/// pass density validation; the caller renders the verdicts.
pub fn classify_state(models_dir: &Path, state_path: &Path) -> Result<Vec<ClassifyRow>> {
    let mat = read_state_file(state_path)?;
    let rho = DensityOperator::new(mat)?;
    let features = rho.features();

    let mut model_paths: Vec<PathBuf> = std::fs::read_dir(models_dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().and_then(|e| e.to_str()) == Some(MODEL_EXTENSION))
        .collect();
    model_paths.sort();
    if model_paths.is_empty() {
        return Err(Error::InvalidConfig(format!("no models in {}", models_dir.display())));
    }

    let mut rows = Vec::new();
    for path in &model_paths {
        let (model, _meta) = load_model(path)?;
        let decision = model.classify(&features);
        rows.push(ClassifyRow {
            name: path.file_stem().and_then(|s| s.to_str()).unwrap_or("model").to_string(),
            kind: match model {
                Model::Linear(_) => ModelKind::Linear,
                Model::Rbf(_) => ModelKind::Rbf,
            },
            family: model.family(),
            value: decision.value,
            label: decision.label,
        });
    }
    Ok(rows)
}

/// Normalized witness re-exported for tests that need direct access.
pub fn witness_of(model: &Model) -> Option<&Witness> {
    match model {
        Model::Linear(w) => Some(w),
        Model::Rbf(_) => None,
    }
}
