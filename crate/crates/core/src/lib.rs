//! Tilted sharpness-aware minimization (TSAM) at desk scale.
//!
//! TSAM replaces SAM's worst-case neighborhood loss with a tilted (log-mean-exp)
//! aggregation over a perturbation measure: `L_t(theta) = (1/t) log E_eps[exp(t L(theta+eps))]`.
//! At `t = 0` this is the average perturbed loss; as `t -> inf` it approaches the
//! SAM max. This crate provides:
//!
//! - [`tilt`]: numerically stable tilted aggregation primitives (values, weights,
//!   gradients, t-weighted statistics),
//! - [`landscapes`]: differentiable objectives (1-D toys, GLM losses, a tiny MLP
//!   with manual backprop) plus synthetic data with label-noise injection,
//! - [`quadrature`]: dense-grid reference evaluations of the tilted objective and
//!   its gradient, used both by the 1-D optimizers and as test oracles,
//! - [`samplers`]: perturbation samplers (naive, normalized-ascent, Euler HMC with
//!   optional Metropolis acceptance),
//! - [`optimizers`]: ERM / SAM / TSAM training loops with trajectory recording,
//! - [`analysis`]: sharpness reports, tilted Hessians, top-k Hessian eigenvalues,
//!   smoothness estimates, and generalization-bound components,
//! - [`harness`]: config parsing, experiment orchestration, CSV output,
//! - [`oracles`]: the independent brute-force computations backing the test suite,
//!   also runnable through the `tsam oracle` CLI subcommand.

pub mod analysis;
pub mod error;
pub mod harness;
pub mod landscapes;
pub mod optimizers;
pub mod oracles;
pub mod quadrature;
pub mod rng;
pub mod samplers;
pub mod tilt;

pub use error::{Result, TsamError};
