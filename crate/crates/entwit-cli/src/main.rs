//! `entwit` — generate four-qubit state datasets, train entanglement
//! witnesses, and evaluate them.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use entwit::pipeline::{
    classify_state, generate_datasets, parse_kv, run_eval, run_training, sweep_epsilon,
    ExperimentConfig, GammaSpec, ModelKind, SplitSpec, TrainRequest, HISTOGRAM_BINS,
};
use entwit::sampling::{FamilyTag, Orbit};
use entwit::svm::TrainConfig;
use entwit::{Error, Result};

const SEED_ENV: &str = "ENTWIT_SEED";

#[derive(Parser)]
#[command(
    name = "entwit",
    version,
    about = "Train and evaluate entanglement witnesses for four-qubit states"
)]
struct Cli {
    /// Config file with `key = value` defaults mirroring the flags
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate labeled dataset files, one per family
    Gen(GenArgs),
    /// Train a linear witness or an RBF kernel model for one family
    Train(TrainArgs),
    /// Score a saved model against every dataset in a directory
    Eval(EvalArgs),
    /// Re-score saved witnesses on fresh orbits across epsilon values
    SweepEpsilon(SweepArgs),
    /// Evaluate every saved model on a density-matrix state file
    Classify(ClassifyArgs),
}

#[derive(clap::Args)]
struct GenArgs {
    /// Family tag, comma list, or `all`
    #[arg(long)]
    family: Option<String>,
    /// Samples per family
    #[arg(long)]
    count: Option<usize>,
    /// Orbit strength for SLOCC families
    #[arg(long)]
    epsilon: Option<f64>,
    /// Draw orbit unitaries from the Haar measure instead of exp(iεH)
    #[arg(long)]
    haar: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct TrainArgs {
    /// Directory holding the dataset files
    #[arg(long)]
    data: Option<PathBuf>,
    /// Entangled family to train against its separable counterpart
    #[arg(long)]
    family: Option<String>,
    /// `linear` or `rbf`
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    batch: Option<usize>,
    /// Kernel width: a number, or `median` for the median heuristic
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    c: Option<f64>,
    /// Per-class split sizes `train,validation,test`
    #[arg(long)]
    split: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Model file to write (metrics go next to it)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct EvalArgs {
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long)]
    model_dir: Option<PathBuf>,
    /// Comma-separated epsilon values
    #[arg(long)]
    epsilons: Option<String>,
    /// Also score fully Haar-random orbits
    #[arg(long)]
    haar: bool,
    /// Fresh samples per family and epsilon
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ClassifyArgs {
    /// Directory of saved models
    #[arg(long)]
    models: Option<PathBuf>,
    /// State file: 16 lines of 16 comma-separated `re±imj` entries
    #[arg(long)]
    state: Option<PathBuf>,
}

/// Defaults loaded from the config file; flags win, then these, then the
/// seed environment variable, then built-in defaults.
struct Defaults {
    map: BTreeMap<String, String>,
}

impl Defaults {
    fn load(path: Option<&PathBuf>) -> Result<Self> {
        let map = match path {
            Some(p) => parse_kv(&std::fs::read_to_string(p)?)?,
            None => BTreeMap::new(),
        };
        Ok(Self { map })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                Error::InvalidConfig(format!("config key '{key}' has unusable value '{raw}'"))
            }),
        }
    }

    fn flag(&self, key: &str) -> bool {
        matches!(self.map.get(key).map(String::as_str), Some("true") | Some("1") | Some("yes"))
    }

    fn seed(&self, flag: Option<u64>) -> Result<u64> {
        if let Some(s) = flag {
            return Ok(s);
        }
        if let Some(s) = self.get::<u64>("seed")? {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(raw) => raw
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("{SEED_ENV} must be an integer"))),
            Err(_) => Ok(0),
        }
    }
}

fn parse_families(raw: &str) -> Result<Vec<FamilyTag>> {
    if raw.trim().eq_ignore_ascii_case("all") {
        return Ok(FamilyTag::ALL.to_vec());
    }
    raw.split(',').map(FamilyTag::from_str).collect()
}

fn parse_split(raw: &str) -> Result<SplitSpec> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::InvalidConfig(format!(
            "split must be three comma-separated sizes, got '{raw}'"
        )));
    }
    let parse = |s: &str| -> Result<usize> {
        s.parse().map_err(|_| Error::InvalidConfig(format!("bad split size '{s}'")))
    };
    Ok(SplitSpec { train: parse(parts[0])?, validation: parse(parts[1])?, test: parse(parts[2])? })
}

fn run_gen(args: &GenArgs, defaults: &Defaults) -> Result<()> {
    let family_raw = args
        .family
        .clone()
        .or(defaults.get::<String>("family")?)
        .ok_or_else(|| Error::InvalidConfig("gen needs --family".into()))?;
    let families = parse_families(&family_raw)?;
    let count = match args.count.or(defaults.get("count")?) {
        Some(c) => c,
        None => ExperimentConfig::default().samples_per_family,
    };
    let epsilon = match args.epsilon.or(defaults.get("epsilon")?) {
        Some(e) => e,
        None => 0.5,
    };
    let orbit = if args.haar || defaults.flag("haar") { Orbit::Haar } else { Orbit::Epsilon(epsilon) };
    let seed = defaults.seed(args.seed)?;
    let out_dir = args
        .out
        .clone()
        .or(defaults.get::<PathBuf>("out")?)
        .ok_or_else(|| Error::InvalidConfig("gen needs --out".into()))?;

    // splits are irrelevant while generating; keep them consistent with the
    // requested count so validation passes
    let per_class_test = (count / 10).max(1).min(count.saturating_sub(2).max(1));
    let split = if count > 2 * per_class_test {
        SplitSpec {
            train: count - 2 * per_class_test,
            validation: per_class_test,
            test: per_class_test,
        }
    } else {
        SplitSpec { train: count.saturating_sub(2).max(1), validation: 1, test: 1 }
    };
    let cfg = ExperimentConfig {
        families,
        samples_per_family: count,
        orbit,
        split,
        out_dir,
        seed,
        ..ExperimentConfig::default()
    };
    for path in generate_datasets(&cfg)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run_train(args: &TrainArgs, defaults: &Defaults) -> Result<()> {
    let data_dir = args
        .data
        .clone()
        .or(defaults.get::<PathBuf>("data")?)
        .ok_or_else(|| Error::InvalidConfig("train needs --data".into()))?;
    let family: FamilyTag = args
        .family
        .clone()
        .or(defaults.get::<String>("family")?)
        .ok_or_else(|| Error::InvalidConfig("train needs --family".into()))?
        .parse()?;
    let kind = match args
        .model
        .clone()
        .or(defaults.get::<String>("model")?)
        .unwrap_or_else(|| "linear".into())
        .to_ascii_lowercase()
        .as_str()
    {
        "linear" => ModelKind::Linear,
        "rbf" => ModelKind::Rbf,
        other => {
            return Err(Error::InvalidConfig(format!(
                "model must be 'linear' or 'rbf', got '{other}'"
            )))
        }
    };
    let base = TrainConfig::default();
    let train = TrainConfig {
        lambda: args.lambda.or(defaults.get("lambda")?).unwrap_or(base.lambda),
        learning_rate: args.lr.or(defaults.get("lr")?).unwrap_or(base.learning_rate),
        adam_epsilon: base.adam_epsilon,
        epochs: args.epochs.or(defaults.get("epochs")?).unwrap_or(base.epochs),
        batch_size: args.batch.or(defaults.get("batch")?).unwrap_or(base.batch_size),
        seed: defaults.seed(args.seed)?,
    };
    let gamma_raw = args.gamma.clone().or(defaults.get::<String>("gamma")?);
    let gamma = match gamma_raw.as_deref() {
        None => GammaSpec::Fixed(ExperimentConfig::default().gamma),
        Some(raw) if raw.eq_ignore_ascii_case("median") => GammaSpec::Median,
        Some(raw) => GammaSpec::Fixed(raw.parse().map_err(|_| {
            Error::InvalidConfig(format!("gamma must be a number or 'median', got '{raw}'"))
        })?),
    };
    let c = args.c.or(defaults.get("c")?).unwrap_or(1.0);
    let split = match args.split.clone().or(defaults.get::<String>("split")?) {
        Some(raw) => parse_split(&raw)?,
        None => SplitSpec::default(),
    };
    let out = args
        .out
        .clone()
        .or(defaults.get::<PathBuf>("out")?)
        .ok_or_else(|| Error::InvalidConfig("train needs --out".into()))?;

    let outcome = run_training(&TrainRequest {
        data_dir,
        family,
        kind,
        split,
        train,
        gamma,
        c,
        out,
    })?;
    println!("wrote {}", outcome.model_path.display());
    println!("wrote {}", outcome.metrics_path.display());
    println!(
        "validation: recall {:.4}, specificity {:.4}, accuracy {:.4}",
        outcome.validation.entangled_recall,
        outcome.validation.separable_specificity,
        outcome.validation.accuracy
    );
    println!(
        "test:       recall {:.4}, specificity {:.4}, accuracy {:.4}",
        outcome.test.entangled_recall,
        outcome.test.separable_specificity,
        outcome.test.accuracy
    );
    Ok(())
}

fn run_eval_cmd(args: &EvalArgs, defaults: &Defaults) -> Result<()> {
    let model = args
        .model
        .clone()
        .or(defaults.get::<PathBuf>("model")?)
        .ok_or_else(|| Error::InvalidConfig("eval needs --model".into()))?;
    let data = args
        .data
        .clone()
        .or(defaults.get::<PathBuf>("data")?)
        .ok_or_else(|| Error::InvalidConfig("eval needs --data".into()))?;
    let bins = args.bins.or(defaults.get("bins")?).unwrap_or(HISTOGRAM_BINS);
    let out = args
        .out
        .clone()
        .or(defaults.get::<PathBuf>("out")?)
        .ok_or_else(|| Error::InvalidConfig("eval needs --out".into()))?;
    let outcome = run_eval(&model, &data, bins, &out)?;
    println!("wrote {}", outcome.score_path.display());
    println!("wrote {}", outcome.histogram_path.display());
    for row in &outcome.rows {
        println!(
            "{}\tepsilon={}\trecall={}\tspecificity={}\tn={}",
            row.family, row.epsilon, row.recall, row.specificity, row.n
        );
    }
    Ok(())
}

fn run_sweep(args: &SweepArgs, defaults: &Defaults) -> Result<()> {
    let model_dir = args
        .model_dir
        .clone()
        .or(defaults.get::<PathBuf>("model-dir")?)
        .ok_or_else(|| Error::InvalidConfig("sweep-epsilon needs --model-dir".into()))?;
    let epsilons_raw = args
        .epsilons
        .clone()
        .or(defaults.get::<String>("epsilons")?)
        .unwrap_or_else(|| "0.5,0.75,1.0".into());
    let epsilons = epsilons_raw
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("bad epsilon '{s}'")))
        })
        .collect::<Result<Vec<f64>>>()?;
    let include_haar = args.haar || defaults.flag("haar");
    let count = args.count.or(defaults.get("count")?).unwrap_or(2000);
    let seed = defaults.seed(args.seed)?;
    let out = args
        .out
        .clone()
        .or(defaults.get::<PathBuf>("out")?)
        .ok_or_else(|| Error::InvalidConfig("sweep-epsilon needs --out".into()))?;

    let (table, rows) = sweep_epsilon(&model_dir, &epsilons, include_haar, count, seed, &out)?;
    println!("wrote {}", table.display());
    for row in &rows {
        println!(
            "{}\tepsilon={}\trecall={}\tspecificity={}\tn={}",
            row.family, row.epsilon, row.recall, row.specificity, row.n
        );
    }
    Ok(())
}

fn run_classify(args: &ClassifyArgs, defaults: &Defaults) -> Result<()> {
    let models = args
        .models
        .clone()
        .or(defaults.get::<PathBuf>("models")?)
        .ok_or_else(|| Error::InvalidConfig("classify needs --models".into()))?;
    let state = args
        .state
        .clone()
        .or(defaults.get::<PathBuf>("state")?)
        .ok_or_else(|| Error::InvalidConfig("classify needs --state".into()))?;

    let rows = classify_state(&models, &state)?;
    let mut fired = false;
    for row in &rows {
        println!("{} ({}): value = {}", row.name, row.kind, row.value);
    }
    for row in &rows {
        if row.value < 0.0 {
            fired = true;
            let family = row
                .family
                .map(|f| f.to_string())
                .unwrap_or_else(|| "unknown".into());
            match row.kind {
                ModelKind::Linear => {
                    println!("entanglement detected (family {family} witness)")
                }
                ModelKind::Rbf => {
                    println!("flagged entangled (family {family} rbf model)")
                }
            }
        }
    }
    if !fired {
        // witnesses are one-sided: a silent panel does not certify separability
        println!("no witness fired");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Defaults::load(cli.config.as_ref()).and_then(|defaults| match &cli.command {
        Command::Gen(args) => run_gen(args, &defaults),
        Command::Train(args) => run_train(args, &defaults),
        Command::Eval(args) => run_eval_cmd(args, &defaults),
        Command::SweepEpsilon(args) => run_sweep(args, &defaults),
        Command::Classify(args) => run_classify(args, &defaults),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
