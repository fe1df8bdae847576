use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::network::{bce_loss, ForwardOptions};
use super::{Architecture, ConvNetModel};
use crate::error::{Error, Result};
use crate::rng::child_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub arch: Architecture,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// Epochs without validation-loss improvement before stopping.
    pub patience: usize,
    pub seed: u64,
    pub threshold: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            arch: Architecture::default(),
            epochs: 100,
            batch_size: 32,
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            patience: 5,
            seed: 42,
            threshold: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_accuracy: f64,
    pub val_loss: f64,
    pub val_accuracy: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    /// Weights from the epoch with the lowest validation loss.
    pub model: ConvNetModel,
    pub history: Vec<EpochRecord>,
    pub best_epoch: usize,
}

struct Adam {
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    step: i32,
}

impl Adam {
    fn new(model: &mut ConvNetModel) -> Self {
        let shapes: Vec<usize> = model.trainable_mut().iter().map(|t| t.len()).collect();
        Adam {
            m: shapes.iter().map(|&n| vec![0.0; n]).collect(),
            v: shapes.iter().map(|&n| vec![0.0; n]).collect(),
            step: 0,
        }
    }

    fn update(&mut self, cfg: &TrainConfig, params: Vec<&mut [f64]>, grads: Vec<&[f64]>) {
        self.step += 1;
        let c1 = 1.0 - cfg.beta1.powi(self.step);
        let c2 = 1.0 - cfg.beta2.powi(self.step);
        for (t, (p, g)) in params.into_iter().zip(grads).enumerate() {
            let (m, v) = (&mut self.m[t], &mut self.v[t]);
            for i in 0..p.len() {
                m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
                v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
                p[i] -= cfg.learning_rate * (m[i] / c1) / ((v[i] / c2).sqrt() + cfg.epsilon);
            }
        }
    }
}

fn to_matrix<R: AsRef<[f64]>>(rows: &[R], idx: &[usize], width: usize) -> Result<Array2<f64>> {
    let mut out = Array2::zeros((idx.len(), width));
    for (r, &i) in idx.iter().enumerate() {
        let src = rows[i].as_ref();
        if src.len() != width {
            return Err(Error::InvalidInput(format!(
                "row {i} has {} values, expected {width}",
                src.len()
            )));
        }
        if src.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "row {i} has non-finite values"
            )));
        }
        out.row_mut(r).assign(&ndarray::ArrayView1::from(src));
    }
    Ok(out)
}

fn accuracy(probs: &[f64], labels: &[f64], threshold: f64) -> f64 {
    let hits = probs
        .iter()
        .zip(labels)
        .filter(|(&p, &y)| (p > threshold) == (y > 0.5))
        .count();
    hits as f64 / probs.len().max(1) as f64
}

/// Mini-batch Adam on standardized rows with early stopping on validation
/// loss. Batch normalization uses batch statistics during training and
/// updates its running estimates after every step.
pub fn train<R: AsRef<[f64]>>(
    train_rows: &[R],
    train_labels: &[u8],
    val_rows: &[R],
    val_labels: &[u8],
    cfg: &TrainConfig,
) -> Result<TrainOutcome> {
    if train_rows.is_empty() || val_rows.is_empty() {
        return Err(Error::Fit(
            "training and validation sets must be non-empty".into(),
        ));
    }
    if train_rows.len() != train_labels.len() || val_rows.len() != val_labels.len() {
        return Err(Error::InvalidInput(
            "rows and labels differ in length".into(),
        ));
    }
    if cfg.batch_size == 0 || cfg.epochs == 0 {
        return Err(Error::InvalidInput(
            "batch size and epochs must be positive".into(),
        ));
    }
    let width = cfg.arch.input_len;
    let all: Vec<usize> = (0..train_rows.len()).collect();
    let train_x = to_matrix(train_rows, &all, width)?;
    let train_y: Vec<f64> = train_labels.iter().map(|&l| f64::from(l)).collect();
    let val_idx: Vec<usize> = (0..val_rows.len()).collect();
    let val_y: Vec<f64> = val_labels.iter().map(|&l| f64::from(l)).collect();
    let val_x: Vec<Vec<f64>> = val_idx
        .iter()
        .map(|&i| val_rows[i].as_ref().to_vec())
        .collect();
    to_matrix(val_rows, &val_idx, width)?;

    let mut model = ConvNetModel::new(cfg.arch.clone(), cfg.seed)?;
    model.threshold = cfg.threshold;
    let mut adam = Adam::new(&mut model);
    let mut rng = ChaCha8Rng::seed_from_u64(child_seed(cfg.seed, 1));
    let momentum = cfg.arch.bn_momentum;

    let mut history = Vec::new();
    let mut best: Option<(f64, ConvNetModel, usize)> = None;
    let mut wait = 0;
    let mut order = all;
    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        let mut hits = 0.0;
        for chunk in order.chunks(cfg.batch_size) {
            let x = train_x.select(ndarray::Axis(0), chunk);
            let y: Vec<f64> = chunk.iter().map(|&i| train_y[i]).collect();
            let (probs, cache) = model.forward(&x, ForwardOptions::TRAIN, Some(&mut rng));
            let probs = probs.as_slice().unwrap();
            loss_sum += bce_loss(probs, &y) * chunk.len() as f64;
            hits += accuracy(probs, &y, cfg.threshold) * chunk.len() as f64;
            let grads = model.backward(&cache, &y);
            adam.update(cfg, model.trainable_mut(), grads.tensors());
            model.bn_running_mean =
                &model.bn_running_mean * momentum + &cache.batch_mean * (1.0 - momentum);
            model.bn_running_var =
                &model.bn_running_var * momentum + &cache.batch_var * (1.0 - momentum);
        }
        let n = order.len() as f64;
        let val_probs = model.predict_many(&val_x).unwrap_or_default();
        let record = EpochRecord {
            epoch,
            train_loss: loss_sum / n,
            train_accuracy: hits / n,
            val_loss: if val_probs.len() == val_y.len() {
                bce_loss(&val_probs, &val_y)
            } else {
                f64::NAN
            },
            val_accuracy: accuracy(&val_probs, &val_y, cfg.threshold),
        };
        let finite = record.train_loss.is_finite()
            && record.val_loss.is_finite()
            && model
                .trainable_mut()
                .iter()
                .all(|t| t.iter().all(|v| v.is_finite()));
        if !finite {
            return Err(Error::Diverged {
                epoch,
                message: "loss or weights became non-finite".into(),
            });
        }
        let improved = best.as_ref().is_none_or(|(b, _, _)| record.val_loss < *b);
        let val_loss = record.val_loss;
        history.push(record);
        if improved {
            best = Some((val_loss, model.clone(), epoch));
            wait = 0;
        } else {
            wait += 1;
            if wait >= cfg.patience.max(1) {
                break;
            }
        }
    }
    let (_, model, best_epoch) = best.expect("at least one epoch ran");
    Ok(TrainOutcome {
        model,
        history,
        best_epoch,
    })
}
