use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;
use stylodetect::convnet::{self, TrainConfig};
use stylodetect::corpus::{read_feature_matrix, write_model, Classifier, LabeledRow, ModelFile};
use stylodetect::features::{
    fit_standardizer, usable_rows, FeatureVector, StandardizerState, FEATURE_COUNT,
};
use stylodetect::forest::{fit_forest, grid_search, ForestParams, GridSpec};
use stylodetect::Error;

use super::{probabilities, Context};
use crate::failure::Failure;
use crate::ModelChoice;

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, value_enum)]
    model: ModelChoice,
    /// Training feature matrix.
    #[arg(long)]
    train: PathBuf,
    /// Validation feature matrix (required for the convnet).
    #[arg(long)]
    validation: Option<PathBuf>,
    /// Model file to write.
    #[arg(long, short)]
    output: PathBuf,
    /// Per-epoch (convnet) or per-cell (grid search) history as CSV.
    #[arg(long)]
    history: Option<PathBuf>,
    /// Decision threshold stored with the model.
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// Store the current time in the model; by default 0 keeps reruns byte-identical.
    #[arg(long)]
    record_time: bool,

    /// Number of trees.
    #[arg(long, default_value_t = 100, help_heading = "Forest")]
    trees: usize,
    /// Maximum tree depth (unlimited by default).
    #[arg(long, help_heading = "Forest")]
    max_depth: Option<usize>,
    /// Features considered per split (default ceil(sqrt(68)) = 9).
    #[arg(long, help_heading = "Forest")]
    max_features: Option<usize>,
    /// Grow every tree on the full training set.
    #[arg(long, help_heading = "Forest")]
    no_bootstrap: bool,
    /// Cross-validated search over trees {50,100,200} x depth {none,10,20}.
    #[arg(long, help_heading = "Forest")]
    grid: bool,
    /// Folds for the grid search.
    #[arg(long, default_value_t = 5, help_heading = "Forest")]
    folds: usize,

    #[arg(long, default_value_t = 100, help_heading = "Network")]
    epochs: usize,
    #[arg(long, default_value_t = 32, help_heading = "Network")]
    batch_size: usize,
    #[arg(long, default_value_t = 1e-3, help_heading = "Network")]
    learning_rate: f64,
    /// Epochs without validation-loss improvement before stopping.
    #[arg(long, default_value_t = 5, help_heading = "Network")]
    patience: usize,
}

fn split_rows(rows: Vec<LabeledRow>) -> (Vec<FeatureVector>, Vec<u8>) {
    rows.into_iter().unzip()
}

fn dense(
    state: &StandardizerState,
    vectors: &[FeatureVector],
) -> Result<Vec<[f64; FEATURE_COUNT]>, Error> {
    vectors.iter().map(|v| state.standardize(v)).collect()
}

fn accuracy(probs: &[f64], labels: &[u8], threshold: f64) -> f64 {
    let hits = probs
        .iter()
        .zip(labels)
        .filter(|(&p, &y)| u8::from(p > threshold) == y)
        .count();
    hits as f64 / labels.len().max(1) as f64
}

fn write_history(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e).into())
}

pub fn run(ctx: &Context, args: &TrainArgs) -> Result<(), Failure> {
    if !(0.0..=1.0).contains(&args.threshold) {
        return Err(Failure::input(format!(
            "threshold {} outside [0, 1]",
            args.threshold
        )));
    }
    let (vectors, labels) = split_rows(read_feature_matrix(&args.train)?);
    let validation = match &args.validation {
        Some(p) => Some(split_rows(read_feature_matrix(p)?)),
        None if args.model == ModelChoice::Convnet => {
            return Err(Failure::input(
                "the convnet needs --validation for early stopping",
            ));
        }
        None => None,
    };

    let keep = usable_rows(&vectors);
    if keep.is_empty() {
        return Err(Failure::training(format!(
            "all {} training rows have missing feature values; nothing left to train on",
            vectors.len()
        )));
    }
    if keep.len() < vectors.len() {
        ctx.info(format!(
            "dropped {} training rows with missing values",
            vectors.len() - keep.len()
        ));
    }
    let classes = |idx: &[usize]| {
        [0u8, 1]
            .iter()
            .filter(|c| idx.iter().any(|&i| labels[i] == **c))
            .count()
    };
    let all: Vec<usize> = (0..labels.len()).collect();
    if classes(&keep) < 2 && classes(&all) == 2 {
        return Err(Failure::training(format!(
            "only one class remains after dropping {} rows with missing values",
            vectors.len() - keep.len()
        )));
    }
    let standardizer = fit_standardizer(&vectors)?;
    let kept: Vec<FeatureVector> = keep.iter().map(|&i| vectors[i].clone()).collect();
    let x = dense(&standardizer, &kept)?;
    let y: Vec<u8> = keep.iter().map(|&i| labels[i]).collect();
    let val = match &validation {
        Some((v, l)) => Some((dense(&standardizer, v)?, l.clone())),
        None => None,
    };

    let mut history = None;
    let classifier = match args.model {
        ModelChoice::Forest => {
            let mut params = ForestParams {
                n_estimators: args.trees,
                max_depth: args.max_depth,
                feature_subset_size: args.max_features,
                seed: ctx.seed,
                bootstrap: !args.no_bootstrap,
                threshold: args.threshold,
                jobs: ctx.jobs,
            };
            if args.grid {
                let mut spec = GridSpec::default_for(FEATURE_COUNT, ctx.seed);
                spec.folds = args.folds;
                spec.jobs = ctx.jobs;
                if let Some(k) = args.max_features {
                    spec.feature_subset_size = vec![k];
                }
                let result = grid_search(&x, &y, &spec)?;
                let mut csv = String::from("n_estimators,max_depth,max_features,cv_accuracy\n");
                for (hp, acc) in &result.cells {
                    let depth = hp
                        .max_depth
                        .map_or_else(|| "none".to_string(), |d| d.to_string());
                    writeln!(
                        csv,
                        "{},{depth},{},{acc:?}",
                        hp.n_estimators, hp.feature_subset_size
                    )
                    .unwrap();
                }
                history = Some(csv);
                println!(
                    "grid best: trees {} depth {} features {} (cv accuracy {:.4})",
                    result.best.n_estimators,
                    result
                        .best
                        .max_depth
                        .map_or_else(|| "none".to_string(), |d| d.to_string()),
                    result.best.feature_subset_size,
                    result.best_accuracy
                );
                params.n_estimators = result.best.n_estimators;
                params.max_depth = result.best.max_depth;
                params.feature_subset_size = Some(result.best.feature_subset_size);
            }
            Classifier::Forest(fit_forest(&x, &y, &params)?)
        }
        ModelChoice::Convnet => {
            let (vx, vy) = val.as_ref().expect("checked above");
            let cfg = TrainConfig {
                epochs: args.epochs,
                batch_size: args.batch_size,
                learning_rate: args.learning_rate,
                patience: args.patience,
                seed: ctx.seed,
                threshold: args.threshold,
                ..Default::default()
            };
            let outcome = convnet::train(&x, &y, vx, vy, &cfg)?;
            let mut csv = String::from("epoch,train_loss,train_accuracy,val_loss,val_accuracy\n");
            for r in &outcome.history {
                writeln!(
                    csv,
                    "{},{:?},{:?},{:?},{:?}",
                    r.epoch, r.train_loss, r.train_accuracy, r.val_loss, r.val_accuracy
                )
                .unwrap();
                ctx.info(format!(
                    "epoch {:>3}  loss {:.4}  acc {:.4}  val_loss {:.4}  val_acc {:.4}",
                    r.epoch, r.train_loss, r.train_accuracy, r.val_loss, r.val_accuracy
                ));
            }
            history = Some(csv);
            println!(
                "epochs run: {} (best {})",
                outcome.history.len(),
                outcome.best_epoch
            );
            Classifier::ConvNet(outcome.model)
        }
    };

    let train_rows: Vec<Vec<f64>> = x.iter().map(|r| r.to_vec()).collect();
    println!(
        "train accuracy: {:.4}",
        accuracy(
            &probabilities(&classifier, &train_rows)?,
            &y,
            args.threshold
        )
    );
    if let Some((vx, vy)) = &val {
        let rows: Vec<Vec<f64>> = vx.iter().map(|r| r.to_vec()).collect();
        println!(
            "validation accuracy: {:.4}",
            accuracy(&probabilities(&classifier, &rows)?, vy, args.threshold)
        );
    }

    let mut file = ModelFile::new(classifier, Some(standardizer));
    if args.record_time {
        file.trained_at = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs() as i64);
    }
    write_model(&file, &args.output)?;
    ctx.info(format!("wrote {}", args.output.display()));
    match (&args.history, history) {
        (Some(path), Some(text)) => write_history(path, &text)?,
        (Some(_), None) => {
            ctx.info("no history to write: forest training records history only with --grid")
        }
        _ => {}
    }
    Ok(())
}
