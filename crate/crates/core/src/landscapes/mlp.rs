//! Tiny fully-connected classifier with manual backpropagation.
//!
//! tanh hidden layers (twice differentiable, so Hessian probes behave), softmax
//! cross-entropy with optional label smoothing, and an optional per-sample loss
//! cap for the bounded-loss generalization checks. Parameters live in one flat
//! vector: per layer, the row-major weight matrix followed by the bias.

use super::{DataLandscape, Landscape, Split, SyntheticDataset};
use crate::error::{Result, TsamError};
use crate::rng::{root_rng, standard_normal};

#[derive(Debug, Clone, PartialEq)]
pub struct MlpSpec {
    pub input_dim: usize,
    pub hidden: Vec<usize>,
    pub classes: usize,
    pub label_smoothing: f64,
}

impl MlpSpec {
    pub fn new(input_dim: usize, hidden: Vec<usize>, classes: usize) -> Self {
        MlpSpec { input_dim, hidden, classes, label_smoothing: 0.0 }
    }

    pub fn with_label_smoothing(mut self, alpha: f64) -> Self {
        self.label_smoothing = alpha;
        self
    }

    /// Layer sizes including input and output.
    fn widths(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.hidden.len() + 2);
        w.push(self.input_dim);
        w.extend_from_slice(&self.hidden);
        w.push(self.classes);
        w
    }

    pub fn param_count(&self) -> usize {
        let w = self.widths();
        (1..w.len()).map(|l| w[l] * w[l - 1] + w[l]).sum()
    }
}

#[derive(Debug, Clone)]
pub struct MlpLandscape {
    spec: MlpSpec,
    widths: Vec<usize>,
    features: Vec<f64>,
    labels: Vec<usize>,
    /// Per-sample cross-entropy cap; capped samples contribute a zero gradient.
    loss_cap: Option<f64>,
}

impl MlpLandscape {
    pub fn new(spec: MlpSpec, features: Vec<f64>, labels: Vec<usize>) -> Result<Self> {
        if features.len() != labels.len() * spec.input_dim {
            return Err(TsamError::DimensionMismatch {
                expected: labels.len() * spec.input_dim,
                got: features.len(),
            });
        }
        if labels.iter().any(|&y| y >= spec.classes) {
            return Err(TsamError::InvalidParameter("label out of class range".into()));
        }
        let widths = spec.widths();
        Ok(MlpLandscape { spec, widths, features, labels, loss_cap: None })
    }

    pub fn from_dataset(spec: MlpSpec, dataset: &SyntheticDataset, split: Split) -> Result<Self> {
        Self::new(
            spec,
            dataset.features(split).to_vec(),
            dataset.labels(split).to_vec(),
        )
    }

    pub fn with_loss_cap(mut self, m: f64) -> Self {
        self.loss_cap = Some(m);
        self
    }

    pub fn spec(&self) -> &MlpSpec {
        &self.spec
    }

    /// Scaled-normal init, one stream per seed.
    pub fn init_params(&self, seed: u64) -> Vec<f64> {
        let mut rng = root_rng(seed);
        let mut theta = Vec::with_capacity(self.spec.param_count());
        for l in 1..self.widths.len() {
            let fan_in = self.widths[l - 1];
            let scale = (1.0 / fan_in as f64).sqrt();
            for _ in 0..self.widths[l] * fan_in {
                theta.push(scale * standard_normal(&mut rng));
            }
            for _ in 0..self.widths[l] {
                theta.push(0.0);
            }
        }
        theta
    }

    /// Logits for sample `i`; scratch activations are returned for backprop.
    fn forward(&self, theta: &[f64], i: usize) -> Vec<Vec<f64>> {
        let d = self.spec.input_dim;
        let mut acts: Vec<Vec<f64>> = Vec::with_capacity(self.widths.len());
        acts.push(self.features[i * d..(i + 1) * d].to_vec());
        let mut offset = 0;
        for l in 1..self.widths.len() {
            let (n_out, n_in) = (self.widths[l], self.widths[l - 1]);
            let prev = &acts[l - 1];
            let mut z = vec![0.0; n_out];
            for r in 0..n_out {
                let row = &theta[offset + r * n_in..offset + (r + 1) * n_in];
                let mut s = theta[offset + n_out * n_in + r];
                for (w, a) in row.iter().zip(prev) {
                    s += w * a;
                }
                z[r] = s;
            }
            offset += n_out * n_in + n_out;
            if l + 1 < self.widths.len() {
                for v in &mut z {
                    *v = v.tanh();
                }
            }
            acts.push(z);
        }
        acts
    }

    /// Smoothed target distribution for label `y`.
    fn target(&self, y: usize) -> Vec<f64> {
        let c = self.spec.classes;
        let alpha = self.spec.label_smoothing;
        let mut q = vec![alpha / c as f64; c];
        q[y] += 1.0 - alpha;
        q
    }

    fn sample_loss(&self, logits: &[f64], y: usize) -> f64 {
        let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let z: f64 = logits.iter().map(|l| (l - m).exp()).sum();
        let log_z = m + z.ln();
        let q = self.target(y);
        let raw: f64 = q
            .iter()
            .zip(logits)
            .map(|(qc, lc)| qc * (log_z - lc))
            .sum();
        match self.loss_cap {
            Some(cap) => raw.min(cap),
            None => raw,
        }
    }

    /// Accumulate the gradient of sample `i` into `grad_out` (skipped when the
    /// cap is active for the sample). Returns the per-sample loss.
    fn backprop(&self, theta: &[f64], i: usize, grad_out: &mut [f64]) -> f64 {
        let acts = self.forward(theta, i);
        let logits = acts.last().unwrap();
        let loss = self.sample_loss(logits, self.labels[i]);
        if let Some(cap) = self.loss_cap {
            if loss >= cap {
                return loss;
            }
        }
        let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exp: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
        let z: f64 = exp.iter().sum();
        let q = self.target(self.labels[i]);
        // dL/dlogits = softmax - target
        let mut delta: Vec<f64> = exp.iter().zip(&q).map(|(e, qc)| e / z - qc).collect();
        // walk the layers backwards; offsets recomputed from widths
        let mut offsets = vec![0usize];
        for l in 1..self.widths.len() {
            let sz = self.widths[l] * self.widths[l - 1] + self.widths[l];
            offsets.push(offsets[l - 1] + sz);
        }
        for l in (1..self.widths.len()).rev() {
            let (n_out, n_in) = (self.widths[l], self.widths[l - 1]);
            let offset = offsets[l - 1];
            let prev = &acts[l - 1];
            for r in 0..n_out {
                let dr = delta[r];
                let grow = &mut grad_out[offset + r * n_in..offset + (r + 1) * n_in];
                for (g, a) in grow.iter_mut().zip(prev) {
                    *g += dr * a;
                }
                grad_out[offset + n_out * n_in + r] += dr;
            }
            if l > 1 {
                let mut next = vec![0.0; n_in];
                for r in 0..n_out {
                    let dr = delta[r];
                    let row = &theta[offset + r * n_in..offset + (r + 1) * n_in];
                    for (nx, w) in next.iter_mut().zip(row) {
                        *nx += dr * w;
                    }
                }
                // through tanh: (1 - a^2)
                for (nx, a) in next.iter_mut().zip(prev) {
                    *nx *= 1.0 - a * a;
                }
                delta = next;
            }
        }
        loss
    }

    pub fn accuracy(&self, theta: &[f64]) -> f64 {
        let mut correct = 0usize;
        for i in 0..self.labels.len() {
            let acts = self.forward(theta, i);
            let logits = acts.last().unwrap();
            let pred = logits
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .map(|(k, _)| k)
                .unwrap();
            if pred == self.labels[i] {
                correct += 1;
            }
        }
        correct as f64 / self.labels.len() as f64
    }

    /// Fraction of samples whose raw loss exceeds the cap (0 when no cap).
    pub fn capped_fraction(&self, theta: &[f64]) -> f64 {
        let Some(cap) = self.loss_cap else { return 0.0 };
        let mut capped = 0usize;
        for i in 0..self.labels.len() {
            let acts = self.forward(theta, i);
            if self.sample_loss(acts.last().unwrap(), self.labels[i]) >= cap {
                capped += 1;
            }
        }
        capped as f64 / self.labels.len() as f64
    }
}

impl Landscape for MlpLandscape {
    fn dim(&self) -> usize {
        self.spec.param_count()
    }

    fn eval(&self, theta: &[f64]) -> f64 {
        let idx: Vec<usize> = (0..self.labels.len()).collect();
        self.eval_batch(theta, &idx)
    }

    fn grad(&self, theta: &[f64]) -> Vec<f64> {
        let idx: Vec<usize> = (0..self.labels.len()).collect();
        self.grad_batch(theta, &idx)
    }
}

impl DataLandscape for MlpLandscape {
    fn num_examples(&self) -> usize {
        self.labels.len()
    }

    fn eval_batch(&self, theta: &[f64], idx: &[usize]) -> f64 {
        let mut total = 0.0;
        for &i in idx {
            let acts = self.forward(theta, i);
            total += self.sample_loss(acts.last().unwrap(), self.labels[i]);
        }
        total / idx.len() as f64
    }

    fn grad_batch(&self, theta: &[f64], idx: &[usize]) -> Vec<f64> {
        let mut grad = vec![0.0; self.dim()];
        for &i in idx {
            self.backprop(theta, i, &mut grad);
        }
        let inv = 1.0 / idx.len() as f64;
        for g in &mut grad {
            *g *= inv;
        }
        grad
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscapes::{fd_grad, make_synthetic_classification};

    fn tiny_mlp() -> (MlpLandscape, Vec<f64>) {
        let ds = make_synthetic_classification(40, 2, 4, 11).unwrap();
        let spec = MlpSpec::new(2, vec![8, 8], 4).with_label_smoothing(0.1);
        let mlp = MlpLandscape::from_dataset(spec, &ds, Split::Train).unwrap();
        let theta = mlp.init_params(5);
        (mlp, theta)
    }

    #[test]
    fn param_count_matches_layout() {
        let spec = MlpSpec::new(2, vec![32, 32], 4);
        // 2*32+32 + 32*32+32 + 32*4+4 = 96 + 1056 + 132
        assert_eq!(spec.param_count(), 1284);
    }

    #[test]
    fn backprop_matches_finite_differences() {
        let (mlp, theta) = tiny_mlp();
        assert!(mlp.dim() <= 200);
        let g = mlp.grad(&theta);
        let fd = fd_grad(&mlp, &theta, 1e-5);
        let num: f64 = g.iter().zip(&fd).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let den: f64 = fd.iter().map(|b| b * b).sum::<f64>().sqrt();
        assert!(num / den < 1e-4, "relative grad error {}", num / den);
    }

    #[test]
    fn loss_nonnegative_and_batch_consistent() {
        let (mlp, theta) = tiny_mlp();
        let full = mlp.eval(&theta);
        assert!(full >= 0.0);
        let idx: Vec<usize> = (0..mlp.num_examples()).collect();
        assert!((mlp.eval_batch(&theta, &idx) - full).abs() < 1e-14);
    }

    #[test]
    fn logistic_regression_is_the_no_hidden_case() {
        let ds = make_synthetic_classification(60, 2, 2, 3).unwrap();
        let spec = MlpSpec::new(2, vec![], 2);
        let lr = MlpLandscape::from_dataset(spec, &ds, Split::Train).unwrap();
        assert_eq!(lr.dim(), 2 * 2 + 2);
        let theta = lr.init_params(1);
        let g = lr.grad(&theta);
        let fd = fd_grad(&lr, &theta, 1e-6);
        for (a, b) in g.iter().zip(&fd) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }

    #[test]
    fn loss_cap_freezes_gradient_for_capped_samples() {
        let ds = make_synthetic_classification(30, 2, 2, 3).unwrap();
        let spec = MlpSpec::new(2, vec![], 2);
        let capped = MlpLandscape::from_dataset(spec.clone(), &ds, Split::Train)
            .unwrap()
            .with_loss_cap(1e-9);
        let theta = capped.init_params(1);
        // with a cap this tight every sample is capped: loss == cap, grad == 0
        assert!((capped.eval(&theta) - 1e-9).abs() < 1e-18);
        assert!(capped.grad(&theta).iter().all(|g| *g == 0.0));
        assert_eq!(capped.capped_fraction(&theta), 1.0);
    }
}
