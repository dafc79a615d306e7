//! Minimal feed-forward network: three hidden layers of twenty ReLU
//! units, one output, trained by mini-batch Adam. MAE loss for
//! regression, binary cross-entropy (with a sigmoid output) for
//! classification.
//!
//! Training is deliberately single-threaded and fully determined by the
//! config seed; independent runs parallelize at the experiment level.

use crate::error::{Error, Result};
use crate::rng::{chacha, shuffle, uniform_symmetric};
use serde::{Deserialize, Serialize};

/// Hidden layer widths, fixed for every model in this crate.
pub const HIDDEN_LAYERS: [usize; 3] = [20, 20, 20];

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

/// Training objective; also fixes the output activation (linear for MAE,
/// sigmoid for binary cross-entropy).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    MeanAbsoluteError,
    BinaryCrossEntropy,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MlpConfig {
    pub input_dim: usize,
    pub loss: LossKind,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl MlpConfig {
    pub fn new(input_dim: usize, loss: LossKind) -> Self {
        Self { input_dim, loss, learning_rate: 1e-3, epochs: 200, batch_size: 32, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 || self.epochs == 0 || self.batch_size == 0 {
            return Err(Error::InvalidConfig(
                "input_dim, epochs and batch_size must be >= 1".into(),
            ));
        }
        if !self.learning_rate.is_finite() || self.learning_rate < 0.0 {
            return Err(Error::InvalidConfig("learning rate must be finite and >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Layer {
    /// Row-major `out_dim x in_dim` weights.
    w: Vec<f64>,
    b: Vec<f64>,
    in_dim: usize,
    out_dim: usize,
}

impl Layer {
    fn zeros_like(&self) -> Layer {
        Layer {
            w: vec![0.0; self.w.len()],
            b: vec![0.0; self.b.len()],
            in_dim: self.in_dim,
            out_dim: self.out_dim,
        }
    }

    fn apply(&self, input: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for row in 0..self.out_dim {
            let weights = &self.w[row * self.in_dim..(row + 1) * self.in_dim];
            let z: f64 = weights.iter().zip(input).map(|(w, x)| w * x).sum();
            out.push(z + self.b[row]);
        }
    }
}

/// Feed-forward regressor/classifier with the fixed 20-20-20 hidden
/// layout.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Mlp {
    layers: Vec<Layer>,
    loss: LossKind,
}

impl Mlp {
    /// Initializes weights uniformly in `(-sqrt(6/fan_in), sqrt(6/fan_in))`
    /// and biases at zero, deterministically from the config seed.
    /// Weights are drawn layer by layer in row-major order.
    pub fn init(config: &MlpConfig) -> Mlp {
        let mut rng = chacha(config.seed, 0);
        let mut dims = vec![config.input_dim];
        dims.extend(HIDDEN_LAYERS);
        dims.push(1);
        let layers = dims
            .windows(2)
            .map(|d| {
                let (in_dim, out_dim) = (d[0], d[1]);
                let bound = (6.0 / in_dim as f64).sqrt();
                let w = (0..in_dim * out_dim)
                    .map(|_| uniform_symmetric(&mut rng, bound))
                    .collect();
                Layer { w, b: vec![0.0; out_dim], in_dim, out_dim }
            })
            .collect();
        Mlp { layers, loss: config.loss }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim
    }

    pub fn loss_kind(&self) -> LossKind {
        self.loss
    }

    /// Single-row forward pass. Classification models return the sigmoid
    /// probability; regression models return the raw output.
    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), got: x.len() });
        }
        let mut act = x.to_vec();
        let mut next = Vec::new();
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            layer.apply(&act, &mut next);
            if i < last {
                for v in next.iter_mut() {
                    *v = v.max(0.0);
                }
            }
            std::mem::swap(&mut act, &mut next);
        }
        let z = act[0];
        Ok(match self.loss {
            LossKind::MeanAbsoluteError => z,
            LossKind::BinaryCrossEntropy => sigmoid(z),
        })
    }

    /// Row-wise forward pass over a feature matrix.
    pub fn predict(&self, rows: &[Vec<f64>]) -> Result<Vec<f64>> {
        rows.iter().map(|row| self.forward(row)).collect()
    }

    /// Mini-batch Adam training. Returns the trained model and the mean
    /// training loss per epoch. Aborts with a diagnostic if the loss
    /// stops being finite.
    pub fn train(
        mut self,
        features: &[Vec<f64>],
        targets: &[f64],
        config: &MlpConfig,
    ) -> Result<(Mlp, Vec<f64>)> {
        config.validate()?;
        if features.is_empty() || features.len() != targets.len() {
            return Err(Error::Training(
                "training data must be non-empty and row-aligned".into(),
            ));
        }
        let n = features.len();
        let mut shuffle_rng = chacha(config.seed, 1);
        let mut adam_m: Vec<Layer> = self.layers.iter().map(Layer::zeros_like).collect();
        let mut adam_v: Vec<Layer> = self.layers.iter().map(Layer::zeros_like).collect();
        let mut step = 0u64;
        let mut history = Vec::with_capacity(config.epochs);
        let mut indices: Vec<usize> = (0..n).collect();
        for epoch in 0..config.epochs {
            shuffle(&mut shuffle_rng, &mut indices);
            let mut epoch_loss = 0.0;
            for batch in indices.chunks(config.batch_size) {
                let (batch_loss, grads) = self.batch_gradients(features, targets, batch)?;
                epoch_loss += batch_loss * batch.len() as f64;
                if !batch_loss.is_finite() {
                    return Err(Error::Training(format!(
                        "non-finite loss {batch_loss} at epoch {epoch}"
                    )));
                }
                step += 1;
                let bias1 = 1.0 - ADAM_BETA1.powi(step as i32);
                let bias2 = 1.0 - ADAM_BETA2.powi(step as i32);
                for (layer, ((g, m), v)) in self
                    .layers
                    .iter_mut()
                    .zip(grads.iter().zip(adam_m.iter_mut()).zip(adam_v.iter_mut()))
                {
                    adam_update(&mut layer.w, &g.w, &mut m.w, &mut v.w, config.learning_rate, bias1, bias2);
                    adam_update(&mut layer.b, &g.b, &mut m.b, &mut v.b, config.learning_rate, bias1, bias2);
                }
            }
            history.push(epoch_loss / n as f64);
        }
        Ok((self, history))
    }

    /// Mean loss and mean analytic gradient over a batch, flattened in
    /// layer order (weights row-major, then biases). Exposed so gradient
    /// audits can compare against finite differences.
    pub fn loss_and_gradient(
        &self,
        features: &[Vec<f64>],
        targets: &[f64],
    ) -> Result<(f64, Vec<f64>)> {
        let batch: Vec<usize> = (0..features.len()).collect();
        let (loss, grads) = self.batch_gradients(features, targets, &batch)?;
        let mut flat = Vec::new();
        for g in &grads {
            flat.extend_from_slice(&g.w);
            flat.extend_from_slice(&g.b);
        }
        Ok((loss, flat))
    }

    /// All parameters flattened in layer order (weights row-major, then
    /// biases).
    pub fn flat_params(&self) -> Vec<f64> {
        let mut flat = Vec::new();
        for layer in &self.layers {
            flat.extend_from_slice(&layer.w);
            flat.extend_from_slice(&layer.b);
        }
        flat
    }

    pub fn set_flat_params(&mut self, params: &[f64]) -> Result<()> {
        let expected: usize = self.layers.iter().map(|l| l.w.len() + l.b.len()).sum();
        if params.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: params.len() });
        }
        let mut offset = 0;
        for layer in &mut self.layers {
            let w_len = layer.w.len();
            layer.w.copy_from_slice(&params[offset..offset + w_len]);
            offset += w_len;
            let b_len = layer.b.len();
            layer.b.copy_from_slice(&params[offset..offset + b_len]);
            offset += b_len;
        }
        Ok(())
    }

    /// Serializes layer shapes and parameters to JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serialization cannot fail")
    }

    pub fn from_json(json: &str) -> Result<Mlp> {
        let m: Mlp = serde_json::from_str(json)?;
        if m.layers.is_empty() {
            return Err(Error::InvalidConfig("model has no layers".into()));
        }
        for layer in &m.layers {
            if layer.w.len() != layer.in_dim * layer.out_dim
                || layer.b.len() != layer.out_dim
                || layer.w.iter().chain(&layer.b).any(|v| !v.is_finite())
            {
                return Err(Error::InvalidConfig("inconsistent model parameters".into()));
            }
        }
        Ok(m)
    }

    /// Backpropagation over one batch of row indices: mean loss and mean
    /// gradient per layer.
    fn batch_gradients(
        &self,
        features: &[Vec<f64>],
        targets: &[f64],
        batch: &[usize],
    ) -> Result<(f64, Vec<Layer>)> {
        let mut grads: Vec<Layer> = self.layers.iter().map(Layer::zeros_like).collect();
        let mut loss_sum = 0.0;
        // Per-layer activations: activations[0] is the input row.
        let mut activations: Vec<Vec<f64>> = Vec::with_capacity(self.layers.len() + 1);
        for &i in batch {
            let x = &features[i];
            if x.len() != self.input_dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.input_dim(),
                    got: x.len(),
                });
            }
            activations.clear();
            activations.push(x.clone());
            let last = self.layers.len() - 1;
            for (l, layer) in self.layers.iter().enumerate() {
                let mut z = Vec::new();
                layer.apply(activations.last().unwrap(), &mut z);
                if l < last {
                    for v in z.iter_mut() {
                        *v = v.max(0.0);
                    }
                }
                activations.push(z);
            }
            let z_out = activations.last().unwrap()[0];
            let y = targets[i];
            let (loss, dz) = match self.loss {
                LossKind::MeanAbsoluteError => {
                    let err = z_out - y;
                    (err.abs(), signum_zero(err))
                }
                LossKind::BinaryCrossEntropy => {
                    // Logits-stable BCE and its gradient sigmoid(z) - y.
                    let loss = z_out.max(0.0) - z_out * y + (-z_out.abs()).exp().ln_1p();
                    (loss, sigmoid(z_out) - y)
                }
            };
            loss_sum += loss;
            // delta holds dL/dz for the current layer, walking backwards.
            let mut delta = vec![dz];
            for l in (0..self.layers.len()).rev() {
                let input = &activations[l];
                let grad = &mut grads[l];
                for (row, d) in delta.iter().enumerate() {
                    grad.b[row] += d;
                    let w_row = &mut grad.w[row * grad.in_dim..(row + 1) * grad.in_dim];
                    for (g, a) in w_row.iter_mut().zip(input) {
                        *g += d * a;
                    }
                }
                if l == 0 {
                    break;
                }
                let layer = &self.layers[l];
                let mut prev = vec![0.0; layer.in_dim];
                for (row, d) in delta.iter().enumerate() {
                    let w_row = &layer.w[row * layer.in_dim..(row + 1) * layer.in_dim];
                    for (p, w) in prev.iter_mut().zip(w_row) {
                        *p += d * w;
                    }
                }
                // ReLU subgradient: 1 for positive pre-activations, 0 at
                // and below zero. Hidden activations are already
                // rectified, so the positive ones mark active units.
                for (p, a) in prev.iter_mut().zip(&activations[l]) {
                    if *a <= 0.0 {
                        *p = 0.0;
                    }
                }
                delta = prev;
            }
        }
        let scale = 1.0 / batch.len() as f64;
        for g in &mut grads {
            for v in g.w.iter_mut().chain(g.b.iter_mut()) {
                *v *= scale;
            }
        }
        Ok((loss_sum * scale, grads))
    }
}

fn adam_update(
    params: &mut [f64],
    grads: &[f64],
    m: &mut [f64],
    v: &mut [f64],
    lr: f64,
    bias1: f64,
    bias2: f64,
) {
    for i in 0..params.len() {
        m[i] = ADAM_BETA1 * m[i] + (1.0 - ADAM_BETA1) * grads[i];
        v[i] = ADAM_BETA2 * v[i] + (1.0 - ADAM_BETA2) * grads[i] * grads[i];
        let m_hat = m[i] / bias1;
        let v_hat = v[i] / bias2;
        params[i] -= lr * m_hat / (v_hat.sqrt() + ADAM_EPS);
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn signum_zero(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Per-feature z-score normalization fitted on training data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Scaler {
    means: Vec<f64>,
    stds: Vec<f64>,
}

impl Scaler {
    pub fn fit(rows: &[Vec<f64>]) -> Result<Scaler> {
        if rows.is_empty() {
            return Err(Error::InvalidSample("cannot fit scaler on empty data".into()));
        }
        let dim = rows[0].len();
        let n = rows.len() as f64;
        let mut means = vec![0.0; dim];
        for row in rows {
            for (m, v) in means.iter_mut().zip(row) {
                *m += v;
            }
        }
        for m in means.iter_mut() {
            *m /= n;
        }
        let mut stds = vec![0.0; dim];
        for row in rows {
            for ((s, v), m) in stds.iter_mut().zip(row).zip(&means) {
                *s += (v - m) * (v - m);
            }
        }
        for s in stds.iter_mut() {
            *s = (*s / n).sqrt();
            if *s == 0.0 {
                *s = 1.0; // constant feature passes through centered
            }
        }
        Ok(Scaler { means, stds })
    }

    pub fn transform(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        rows.iter()
            .map(|row| {
                row.iter()
                    .zip(&self.means)
                    .zip(&self.stds)
                    .map(|((v, m), s)| (v - m) / s)
                    .collect()
            })
            .collect()
    }
}
