use ndarray::{Array1, Array2, Axis, Zip};
use rand::Rng;

use super::ConvNetModel;

/// Controls the two layers whose behaviour differs between training and inference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForwardOptions {
    pub dropout: bool,
    /// Normalize with batch statistics instead of the running estimates.
    pub batch_stats: bool,
}

impl ForwardOptions {
    pub const TRAIN: Self = ForwardOptions {
        dropout: true,
        batch_stats: true,
    };
    pub const INFER: Self = ForwardOptions {
        dropout: false,
        batch_stats: false,
    };
}

/// Intermediate values kept for the backward pass.
#[derive(Debug, Clone)]
pub struct BatchCache {
    batch: usize,
    batch_stats: bool,
    patches: Array2<f64>,
    conv_pre: Array2<f64>,
    xhat: Array2<f64>,
    inv_std: Array1<f64>,
    pub batch_mean: Array1<f64>,
    pub batch_var: Array1<f64>,
    /// Input to each dense layer (after dropout where applicable).
    dense_in: Vec<Array2<f64>>,
    /// Pre-activations of the hidden layers.
    hidden_pre: Vec<Array2<f64>>,
    masks: Vec<Option<Array2<f64>>>,
    pub probs: Array1<f64>,
}

/// Gradients of the trainable tensors.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub conv_weights: Array2<f64>,
    pub conv_bias: Array1<f64>,
    pub bn_gamma: Array1<f64>,
    pub bn_beta: Array1<f64>,
    pub dense: Vec<(Array2<f64>, Array1<f64>)>,
}

impl Gradients {
    /// Same order as [`ConvNetModel::trainable_mut`].
    pub fn tensors(&self) -> Vec<&[f64]> {
        let mut out = vec![
            self.conv_weights.as_slice().unwrap(),
            self.conv_bias.as_slice().unwrap(),
            self.bn_gamma.as_slice().unwrap(),
            self.bn_beta.as_slice().unwrap(),
        ];
        for (w, b) in &self.dense {
            out.push(w.as_slice().unwrap());
            out.push(b.as_slice().unwrap());
        }
        out
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

const CLIP: f64 = 1e-7;

/// Mean binary cross-entropy with probabilities clipped to [1e-7, 1 - 1e-7].
pub fn bce_loss(probs: &[f64], labels: &[f64]) -> f64 {
    assert_eq!(probs.len(), labels.len());
    if probs.is_empty() {
        return 0.0;
    }
    let total: f64 = probs
        .iter()
        .zip(labels)
        .map(|(&p, &y)| {
            let p = p.clamp(CLIP, 1.0 - CLIP);
            -(y * p.ln() + (1.0 - y) * (1.0 - p).ln())
        })
        .sum();
    total / probs.len() as f64
}

/// Inverted-dropout mask: each unit is kept with probability `1 - rate` and
/// scaled by `1 / (1 - rate)`.
pub fn dropout_mask<R: Rng>(rng: &mut R, shape: (usize, usize), rate: f64) -> Array2<f64> {
    let keep = 1.0 - rate;
    let scale = 1.0 / keep;
    Array2::from_shape_simple_fn(shape, || {
        if rng.random::<f64>() < keep {
            scale
        } else {
            0.0
        }
    })
}

fn standard(a: Array2<f64>) -> Array2<f64> {
    if a.is_standard_layout() {
        a
    } else {
        a.as_standard_layout().into_owned()
    }
}

fn relu(a: &Array2<f64>) -> Array2<f64> {
    a.mapv(|v| v.max(0.0))
}

fn add_bias(a: &mut Array2<f64>, b: &Array1<f64>) {
    *a += &b.view().insert_axis(Axis(0));
}

impl ConvNetModel {
    /// Batch forward pass over rows of `x`. A random source is required
    /// when dropout is enabled.
    pub fn forward<R: Rng>(
        &self,
        x: &Array2<f64>,
        opts: ForwardOptions,
        mut rng: Option<&mut R>,
    ) -> (Array1<f64>, BatchCache) {
        let a = &self.arch;
        let (batch, positions, filters) = (x.nrows(), a.conv_len(), a.filters);
        assert_eq!(x.ncols(), a.input_len, "input width");

        let rows = batch * positions;
        let mut patches = Array2::zeros((rows, a.kernel));
        for b in 0..batch {
            for p in 0..positions {
                for k in 0..a.kernel {
                    patches[[b * positions + p, k]] = x[[b, p + k]];
                }
            }
        }
        let mut conv_pre = patches.dot(&self.conv_weights);
        add_bias(&mut conv_pre, &self.conv_bias);
        let act = relu(&conv_pre);

        let (mean, var) = if opts.batch_stats {
            let mean = act.mean_axis(Axis(0)).expect("non-empty batch");
            let var = act.var_axis(Axis(0), 0.0);
            (mean, var)
        } else {
            (self.bn_running_mean.clone(), self.bn_running_var.clone())
        };
        let inv_std = var.mapv(|v| 1.0 / (v + a.bn_epsilon).sqrt());
        let xhat =
            (&act - &mean.view().insert_axis(Axis(0))) * inv_std.view().insert_axis(Axis(0));
        let normed = &xhat * &self.bn_gamma.view().insert_axis(Axis(0))
            + self.bn_beta.view().insert_axis(Axis(0));

        let mut h = normed
            .into_shape_with_order((batch, positions * filters))
            .expect("contiguous");
        let mut dense_in = Vec::with_capacity(4);
        let mut hidden_pre = Vec::with_capacity(3);
        let mut masks = Vec::with_capacity(3);
        for (l, layer) in self.dense[..3].iter().enumerate() {
            let mut pre = h.dot(&layer.weights);
            add_bias(&mut pre, &layer.bias);
            let mut out = relu(&pre);
            let mask = if opts.dropout && a.dropout[l] > 0.0 {
                let rng = rng.as_deref_mut().expect("dropout needs a random source");
                let m = dropout_mask(rng, out.dim(), a.dropout[l]);
                out *= &m;
                Some(m)
            } else {
                None
            };
            dense_in.push(h);
            hidden_pre.push(pre);
            masks.push(mask);
            h = out;
        }
        let mut logits = h.dot(&self.dense[3].weights);
        add_bias(&mut logits, &self.dense[3].bias);
        dense_in.push(h);
        let probs = logits.column(0).mapv(sigmoid);

        let cache = BatchCache {
            batch,
            batch_stats: opts.batch_stats,
            patches,
            conv_pre,
            xhat,
            inv_std,
            batch_mean: mean,
            batch_var: var,
            dense_in,
            hidden_pre,
            masks,
            probs: probs.clone(),
        };
        (probs, cache)
    }

    /// Gradients of the mean binary cross-entropy with respect to every
    /// trainable tensor, given the cache of a forward pass.
    pub fn backward(&self, cache: &BatchCache, labels: &[f64]) -> Gradients {
        assert_eq!(labels.len(), cache.batch);
        let a = &self.arch;
        let n = cache.batch as f64;
        let mut delta =
            Array2::from_shape_fn((cache.batch, 1), |(i, _)| (cache.probs[i] - labels[i]) / n);

        let mut dense = vec![(Array2::zeros((0, 0)), Array1::zeros(0)); 4];
        for l in (0..4).rev() {
            let input = &cache.dense_in[l];
            let w = &self.dense[l].weights;
            dense[l] = (standard(input.t().dot(&delta)), delta.sum_axis(Axis(0)));
            let mut d_in = delta.dot(&w.t());
            if l > 0 {
                let k = l - 1;
                if let Some(m) = &cache.masks[k] {
                    d_in *= m;
                }
                Zip::from(&mut d_in)
                    .and(&cache.hidden_pre[k])
                    .for_each(|d, &z| {
                        if z <= 0.0 {
                            *d = 0.0;
                        }
                    });
            }
            delta = d_in;
        }

        let rows = cache.conv_pre.nrows();
        let d_norm = standard(delta)
            .into_shape_with_order((rows, a.filters))
            .expect("contiguous");
        let bn_gamma = (&d_norm * &cache.xhat).sum_axis(Axis(0));
        let bn_beta = d_norm.sum_axis(Axis(0));
        let dxhat = &d_norm * &self.bn_gamma.view().insert_axis(Axis(0));
        let inv = cache.inv_std.view().insert_axis(Axis(0));
        let mut d_act = if cache.batch_stats {
            let m = rows as f64;
            let sum = dxhat.sum_axis(Axis(0)).insert_axis(Axis(0));
            let dot = (&dxhat * &cache.xhat)
                .sum_axis(Axis(0))
                .insert_axis(Axis(0));
            (&dxhat * m - &sum - &cache.xhat * &dot) * inv / m
        } else {
            &dxhat * &inv
        };
        Zip::from(&mut d_act)
            .and(&cache.conv_pre)
            .for_each(|d, &z| {
                if z <= 0.0 {
                    *d = 0.0;
                }
            });
        Gradients {
            conv_weights: standard(cache.patches.t().dot(&d_act)),
            conv_bias: d_act.sum_axis(Axis(0)),
            bn_gamma,
            bn_beta,
            dense,
        }
    }

    /// Mean loss over a batch, no parameter updates.
    pub fn batch_loss(&self, x: &Array2<f64>, labels: &[f64], opts: ForwardOptions) -> f64 {
        assert!(!opts.dropout, "loss evaluation is deterministic");
        let (probs, _) = self.forward(x, opts, None::<&mut rand_chacha::ChaCha8Rng>);
        bce_loss(probs.as_slice().unwrap(), labels)
    }
}
