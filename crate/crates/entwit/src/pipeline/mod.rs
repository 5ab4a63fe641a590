//! Dataset persistence, experiment configuration, orchestration and report
//! files behind the CLI.

pub mod config;
pub mod dataset;
pub mod model;
pub mod report;
pub mod run;
pub mod statefile;

pub use config::{parse_kv, ExperimentConfig, SplitSpec};
pub use dataset::{Dataset, DatasetHeader};
pub use model::{load_model, save_model, ModelMeta};
pub use run::{
    classify_state, generate_datasets, generate_samples, run_eval, run_training, sweep_epsilon,
    ClassifyRow, EvalOutcome, GammaSpec, ModelKind, TrainOutcome, TrainRequest, HISTOGRAM_BINS,
    MARGIN_KAPPA,
};
