//! Differentiable objectives.
//!
//! A [`Landscape`] evaluates a loss and its gradient at a parameter vector.
//! Dataset-backed landscapes additionally expose mini-batch evaluation through
//! [`DataLandscape`]; a [`BatchView`] pins an index set so the optimizer's step
//! functions can stay generic over full-batch and mini-batch objectives.

mod data;
mod glm;
mod mlp;
mod toy;

pub use data::{make_synthetic_classification, inject_label_noise, Split, SyntheticDataset};
pub use glm::{GlmLandscape, GlmLink};
pub use mlp::{MlpLandscape, MlpSpec};
pub use toy::{Constant, Linear, Quadratic, ToyPiecewise1D, ToySine1D};

use crate::error::{Result, TsamError};

pub trait Landscape: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, theta: &[f64]) -> f64;
    fn grad(&self, theta: &[f64]) -> Vec<f64>;

    fn check_dim(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.dim() {
            return Err(TsamError::DimensionMismatch { expected: self.dim(), got: theta.len() });
        }
        Ok(())
    }
}

impl<L: Landscape + ?Sized> Landscape for &L {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, theta: &[f64]) -> f64 {
        (**self).eval(theta)
    }
    fn grad(&self, theta: &[f64]) -> Vec<f64> {
        (**self).grad(theta)
    }
}

/// Objectives averaged over a training set, with mini-batch access.
pub trait DataLandscape: Landscape {
    fn num_examples(&self) -> usize;
    fn eval_batch(&self, theta: &[f64], idx: &[usize]) -> f64;
    fn grad_batch(&self, theta: &[f64], idx: &[usize]) -> Vec<f64>;
}

/// A landscape restricted to a fixed mini-batch.
pub struct BatchView<'a, L: DataLandscape + ?Sized> {
    inner: &'a L,
    idx: &'a [usize],
}

impl<'a, L: DataLandscape + ?Sized> BatchView<'a, L> {
    pub fn new(inner: &'a L, idx: &'a [usize]) -> Self {
        BatchView { inner, idx }
    }
}

impl<L: DataLandscape + ?Sized> Landscape for BatchView<'_, L> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, theta: &[f64]) -> f64 {
        self.inner.eval_batch(theta, self.idx)
    }
    fn grad(&self, theta: &[f64]) -> Vec<f64> {
        self.inner.grad_batch(theta, self.idx)
    }
}

/// Central-difference gradient. Test oracle; never used on the optimization path.
pub fn fd_grad<L: Landscape + ?Sized>(landscape: &L, theta: &[f64], h: f64) -> Vec<f64> {
    assert!(h > 0.0, "finite-difference step must be positive");
    let mut out = vec![0.0; theta.len()];
    let mut probe = theta.to_vec();
    for i in 0..theta.len() {
        probe[i] = theta[i] + h;
        let up = landscape.eval(&probe);
        probe[i] = theta[i] - h;
        let down = landscape.eval(&probe);
        probe[i] = theta[i];
        out[i] = (up - down) / (2.0 * h);
    }
    out
}

/// Central differences of the gradient; symmetrized. Test oracle.
pub fn fd_hessian<L: Landscape + ?Sized>(landscape: &L, theta: &[f64], h: f64) -> Vec<Vec<f64>> {
    let d = theta.len();
    let mut hess = vec![vec![0.0; d]; d];
    let mut probe = theta.to_vec();
    for i in 0..d {
        probe[i] = theta[i] + h;
        let up = landscape.grad(&probe);
        probe[i] = theta[i] - h;
        let down = landscape.grad(&probe);
        probe[i] = theta[i];
        for j in 0..d {
            hess[i][j] = (up[j] - down[j]) / (2.0 * h);
        }
    }
    for i in 0..d {
        for j in 0..i {
            let s = 0.5 * (hess[i][j] + hess[j][i]);
            hess[i][j] = s;
            hess[j][i] = s;
        }
    }
    hess
}

/// Max relative gradient error against central differences over `n_points`
/// uniform draws in `[lo, hi]^dim`.
pub fn max_grad_check_error<L: Landscape + ?Sized>(
    landscape: &L,
    lo: f64,
    hi: f64,
    n_points: usize,
    h: f64,
    seed: u64,
) -> f64 {
    use rand::Rng;
    let mut rng = crate::rng::root_rng(seed);
    let mut worst = 0.0_f64;
    for _ in 0..n_points {
        let theta: Vec<f64> = (0..landscape.dim()).map(|_| rng.gen_range(lo..hi)).collect();
        let g = landscape.grad(&theta);
        let fd = fd_grad(landscape, &theta, h);
        let num: f64 = g.iter().zip(&fd).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let den: f64 = fd.iter().map(|b| b * b).sum::<f64>().sqrt().max(1.0);
        worst = worst.max(num / den);
    }
    worst
}
