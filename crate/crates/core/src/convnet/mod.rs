//! Compact 1-D convolutional classifier over the feature vector:
//! Conv1D(128, k=3) -> ReLU -> BatchNorm -> Flatten -> Dense 256/128/64
//! (ReLU + dropout 0.4/0.3/0.2) -> Dense 1 (sigmoid).

mod network;
mod train;

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use network::{bce_loss, dropout_mask, sigmoid, BatchCache, ForwardOptions, Gradients};
pub use train::{train, EpochRecord, TrainConfig, TrainOutcome};

use crate::error::{Error, Result};
use crate::features::{schema_hash, FEATURE_COUNT};
use crate::rng::child_seed;

/// Layer sizes and regularization constants.
#[derive(Debug, Clone, PartialEq)]
pub struct Architecture {
    pub input_len: usize,
    pub filters: usize,
    pub kernel: usize,
    pub hidden: [usize; 3],
    pub dropout: [f64; 3],
    pub bn_epsilon: f64,
    pub bn_momentum: f64,
}

impl Default for Architecture {
    fn default() -> Self {
        Architecture {
            input_len: FEATURE_COUNT,
            filters: 128,
            kernel: 3,
            hidden: [256, 128, 64],
            dropout: [0.4, 0.3, 0.2],
            bn_epsilon: 1e-3,
            bn_momentum: 0.99,
        }
    }
}

impl Architecture {
    /// Output positions of the valid, stride-1 convolution.
    pub fn conv_len(&self) -> usize {
        self.input_len + 1 - self.kernel
    }

    pub fn flat_len(&self) -> usize {
        self.conv_len() * self.filters
    }

    pub fn validate(&self) -> Result<()> {
        const LIMIT: usize = 1 << 24;
        let ok = [self.input_len, self.filters, self.kernel]
            .iter()
            .chain(&self.hidden)
            .all(|&v| v <= LIMIT)
            && self.kernel >= 1
            && self.input_len >= self.kernel
            && self.filters >= 1
            && self.hidden.iter().all(|&h| h >= 1)
            && self.dropout.iter().all(|&r| (0.0..1.0).contains(&r))
            && self.bn_epsilon > 0.0
            && (0.0..=1.0).contains(&self.bn_momentum);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "invalid architecture {self:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    /// (inputs, outputs)
    pub weights: Array2<f64>,
    pub bias: Array1<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvNetModel {
    pub arch: Architecture,
    /// (kernel, filters); a single input channel.
    pub conv_weights: Array2<f64>,
    pub conv_bias: Array1<f64>,
    pub bn_gamma: Array1<f64>,
    pub bn_beta: Array1<f64>,
    pub bn_running_mean: Array1<f64>,
    pub bn_running_var: Array1<f64>,
    /// Three hidden layers followed by the output layer.
    pub dense: [Dense; 4],
    pub threshold: f64,
    pub seed: u64,
    pub schema_hash: u64,
}

/// One row of the parameter audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerAudit {
    pub name: &'static str,
    pub kind: &'static str,
    pub input_shape: String,
    pub output_shape: String,
    pub params: usize,
    pub activation: &'static str,
}

fn he_uniform<R: Rng>(rng: &mut R, fan_in: usize, shape: (usize, usize)) -> Array2<f64> {
    let limit = (6.0 / fan_in as f64).sqrt();
    Array2::from_shape_simple_fn(shape, || rng.random_range(-limit..limit))
}

impl ConvNetModel {
    /// He-uniform weights, zero biases, identity batch normalization.
    pub fn new(arch: Architecture, seed: u64) -> Result<Self> {
        arch.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(child_seed(seed, 0));
        let f = arch.filters;
        let conv_weights = he_uniform(&mut rng, arch.kernel, (arch.kernel, f));
        let widths = [
            arch.flat_len(),
            arch.hidden[0],
            arch.hidden[1],
            arch.hidden[2],
            1,
        ];
        let dense = std::array::from_fn(|l| Dense {
            weights: he_uniform(&mut rng, widths[l], (widths[l], widths[l + 1])),
            bias: Array1::zeros(widths[l + 1]),
        });
        Ok(ConvNetModel {
            schema_hash: if arch.input_len == FEATURE_COUNT {
                schema_hash()
            } else {
                0
            },
            arch,
            conv_weights,
            conv_bias: Array1::zeros(f),
            bn_gamma: Array1::ones(f),
            bn_beta: Array1::zeros(f),
            bn_running_mean: Array1::zeros(f),
            bn_running_var: Array1::ones(f),
            dense,
            threshold: 0.5,
            seed,
        })
    }

    /// The standard network on the full feature vector.
    pub fn build(seed: u64) -> Self {
        ConvNetModel::new(Architecture::default(), seed).expect("default architecture is valid")
    }

    /// Per-layer parameter counts, batch-normalization statistics included.
    pub fn param_audit(&self) -> Vec<LayerAudit> {
        let a = &self.arch;
        let (l, p, f) = (a.input_len, a.conv_len(), a.filters);
        let [h1, h2, h3] = a.hidden;
        let dense = |n_in: usize, n_out: usize| n_in * n_out + n_out;
        vec![
            LayerAudit {
                name: "Input",
                kind: "Input Layer",
                input_shape: format!("(None, {l}, 1)"),
                output_shape: format!("(None, {l}, 1)"),
                params: 0,
                activation: "-",
            },
            LayerAudit {
                name: "Conv1D",
                kind: "Convolutional",
                input_shape: format!("(None, {l}, 1)"),
                output_shape: format!("(None, {p}, {f})"),
                params: a.kernel * f + f,
                activation: "ReLU",
            },
            LayerAudit {
                name: "BatchNorm",
                kind: "Normalization",
                input_shape: format!("(None, {p}, {f})"),
                output_shape: format!("(None, {p}, {f})"),
                params: 4 * f,
                activation: "-",
            },
            LayerAudit {
                name: "Flatten",
                kind: "Reshape",
                input_shape: format!("(None, {p}, {f})"),
                output_shape: format!("(None, {})", p * f),
                params: 0,
                activation: "-",
            },
            LayerAudit {
                name: "Dense1",
                kind: "Fully Connected",
                input_shape: format!("(None, {})", p * f),
                output_shape: format!("(None, {h1})"),
                params: dense(p * f, h1),
                activation: "ReLU",
            },
            LayerAudit {
                name: "Dense2",
                kind: "Fully Connected",
                input_shape: format!("(None, {h1})"),
                output_shape: format!("(None, {h2})"),
                params: dense(h1, h2),
                activation: "ReLU",
            },
            LayerAudit {
                name: "Dense3",
                kind: "Fully Connected",
                input_shape: format!("(None, {h2})"),
                output_shape: format!("(None, {h3})"),
                params: dense(h2, h3),
                activation: "ReLU",
            },
            LayerAudit {
                name: "Output",
                kind: "Classification",
                input_shape: format!("(None, {h3})"),
                output_shape: "(None, 1)".to_string(),
                params: dense(h3, 1),
                activation: "Sigmoid",
            },
        ]
    }

    pub fn param_count(&self) -> usize {
        self.param_audit().iter().map(|l| l.params).sum()
    }

    /// Tensors in container order: conv weights and bias, batch-norm gamma,
    /// beta, running mean and variance, then weights and bias of each dense
    /// layer. Each comes with its recorded dimensions.
    pub fn tensors(&self) -> Vec<(Vec<usize>, &[f64])> {
        let a = &self.arch;
        let mut out: Vec<(Vec<usize>, &[f64])> = vec![
            (vec![a.kernel, 1, a.filters], slice(&self.conv_weights)),
            (vec![a.filters], slice1(&self.conv_bias)),
            (vec![a.filters], slice1(&self.bn_gamma)),
            (vec![a.filters], slice1(&self.bn_beta)),
            (vec![a.filters], slice1(&self.bn_running_mean)),
            (vec![a.filters], slice1(&self.bn_running_var)),
        ];
        for d in &self.dense {
            out.push((d.weights.shape().to_vec(), slice(&d.weights)));
            out.push((vec![d.bias.len()], slice1(&d.bias)));
        }
        out
    }

    /// Mutable views of the tensors optimized by gradient descent, in the
    /// same order as [`Gradients::tensors`].
    pub fn trainable_mut(&mut self) -> Vec<&mut [f64]> {
        let [d0, d1, d2, d3] = &mut self.dense;
        let mut out = vec![
            slice_mut(&mut self.conv_weights),
            slice1_mut(&mut self.conv_bias),
            slice1_mut(&mut self.bn_gamma),
            slice1_mut(&mut self.bn_beta),
        ];
        for d in [d0, d1, d2, d3] {
            out.push(slice_mut(&mut d.weights));
            out.push(slice1_mut(&mut d.bias));
        }
        out
    }

    /// Inference-mode probability for a single standardized vector.
    pub fn predict_proba(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.arch.input_len {
            return Err(Error::InvalidInput(format!(
                "expected {} inputs, got {}",
                self.arch.input_len,
                x.len()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite input value".into()));
        }
        let batch = Array2::from_shape_vec((1, x.len()), x.to_vec()).expect("shape matches");
        Ok(self
            .forward(&batch, ForwardOptions::INFER, None::<&mut ChaCha8Rng>)
            .0[0])
    }

    /// Probability and label (1 only when the probability exceeds the threshold).
    pub fn predict(&self, x: &[f64]) -> Result<(f64, u8)> {
        let p = self.predict_proba(x)?;
        Ok((p, u8::from(p > self.threshold)))
    }

    /// Inference over many rows, evaluated in chunks.
    pub fn predict_many<R: AsRef<[f64]>>(&self, rows: &[R]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(rows.len());
        for chunk in rows.chunks(256) {
            let mut batch = Array2::zeros((chunk.len(), self.arch.input_len));
            for (mut dst, src) in batch.rows_mut().into_iter().zip(chunk) {
                let src = src.as_ref();
                if src.len() != self.arch.input_len || src.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidInput(
                        "row has wrong width or non-finite values".into(),
                    ));
                }
                dst.assign(&ndarray::ArrayView1::from(src));
            }
            out.extend(
                self.forward(&batch, ForwardOptions::INFER, None::<&mut ChaCha8Rng>)
                    .0,
            );
        }
        Ok(out)
    }
}

fn slice(a: &Array2<f64>) -> &[f64] {
    a.as_slice().expect("standard layout")
}

fn slice1(a: &Array1<f64>) -> &[f64] {
    a.as_slice().expect("standard layout")
}

fn slice_mut(a: &mut Array2<f64>) -> &mut [f64] {
    a.as_slice_mut().expect("standard layout")
}

fn slice1_mut(a: &mut Array1<f64>) -> &mut [f64] {
    a.as_slice_mut().expect("standard layout")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn audit_matches_reference_table() {
        let model = ConvNetModel::build(42);
        let counts: Vec<usize> = model.param_audit().iter().map(|l| l.params).collect();
        assert_eq!(counts, vec![0, 512, 512, 0, 2_162_944, 32_896, 8_256, 65]);
        assert_eq!(model.param_count(), 2_205_185);
        assert_eq!(model.param_audit()[1].output_shape, "(None, 66, 128)");
        assert_eq!(model.arch.flat_len(), 8448);
        let stored: usize = model.tensors().iter().map(|(_, t)| t.len()).sum();
        assert_eq!(stored, 2_205_185);
    }

    #[test]
    fn initialization_is_seeded() {
        let small = Architecture {
            input_len: 8,
            filters: 4,
            hidden: [6, 5, 4],
            ..Default::default()
        };
        let a = ConvNetModel::new(small.clone(), 1).unwrap();
        let b = ConvNetModel::new(small.clone(), 1).unwrap();
        let c = ConvNetModel::new(small, 2).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.conv_weights, c.conv_weights);
        let limit = (6.0f64 / 3.0).sqrt();
        assert!(a.conv_weights.iter().all(|w| w.abs() <= limit));
        assert!(a.dense[0].bias.iter().all(|&b| b == 0.0));
        assert!(a.bn_running_var.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn zero_weights_give_one_half() {
        let mut model = ConvNetModel::build(0);
        for t in model.trainable_mut() {
            t.fill(0.0);
        }
        let p = model.predict_proba(&[0.3; FEATURE_COUNT]).unwrap();
        assert_eq!(p, 0.5);
    }

    #[test]
    fn inference_is_pure_and_thresholded() {
        let model = ConvNetModel::build(3);
        let x: Vec<f64> = (0..FEATURE_COUNT)
            .map(|i| (i as f64 * 0.37).sin())
            .collect();
        let a = model.predict_proba(&x).unwrap();
        let b = model.predict_proba(&x).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert!(a > 0.0 && a < 1.0);
        assert_eq!(
            model.predict_many(std::slice::from_ref(&x)).unwrap()[0].to_bits(),
            a.to_bits()
        );
        let (_, label) = model.predict(&x).unwrap();
        assert_eq!(label, u8::from(a > 0.5));
    }

    #[test]
    fn threshold_tie_goes_to_class_zero() {
        let mut model = ConvNetModel::build(0);
        for t in model.trainable_mut() {
            t.fill(0.0);
        }
        assert_eq!(model.predict(&[1.0; FEATURE_COUNT]).unwrap(), (0.5, 0));
        model.threshold = 0.4;
        assert_eq!(model.predict(&[1.0; FEATURE_COUNT]).unwrap().1, 1);
    }

    #[test]
    fn rejects_bad_input() {
        let model = ConvNetModel::build(0);
        let mut x = [0.0; FEATURE_COUNT];
        x[5] = f64::NAN;
        assert!(model.predict_proba(&x).is_err());
        assert!(model.predict_proba(&[0.0; 3]).is_err());
    }
}
