//! Numerically stable exponential-tilting primitives.
//!
//! The tilted risk of a loss sample `{l_j}` at tilt `t >= 0` is
//! `(1/t) log(mean_j exp(t l_j))`. It sits between the arithmetic mean (t = 0)
//! and the max (t -> inf). All exponentiation here is max-shifted: tilts up to
//! 1000 against losses up to 1e6 must not overflow, and `exp(700)` already
//! does.

use crate::error::{Result, TsamError};

/// Tilt scalar, sampler/aggregation split, and an optional schedule over steps.
///
/// `delta_tilt` is the exponent the sampler targets (`exp(delta * L)`); the
/// aggregation then reweights with `exp((t - delta) * L)`. The product of the
/// two stages recovers the full tilt `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltConfig {
    pub t: f64,
    pub delta_tilt: f64,
    pub schedule: TiltSchedule,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TiltSchedule {
    Constant,
    /// Linear ramp from `t_start` at step 0 to `t_end` at step `total - 1`.
    Linear { t_start: f64, t_end: f64 },
}

impl TiltConfig {
    pub fn new(t: f64, delta_tilt: f64) -> Result<Self> {
        Self::with_schedule(t, delta_tilt, TiltSchedule::Constant)
    }

    pub fn with_schedule(t: f64, delta_tilt: f64, schedule: TiltSchedule) -> Result<Self> {
        if !t.is_finite() || t < 0.0 {
            return Err(TsamError::InvalidParameter(format!("t must be >= 0, got {t}")));
        }
        if !delta_tilt.is_finite() || delta_tilt < 0.0 || delta_tilt > t {
            return Err(TsamError::InvalidParameter(format!(
                "delta_tilt must lie in [0, t] = [0, {t}], got {delta_tilt}"
            )));
        }
        if let TiltSchedule::Linear { t_start, t_end } = schedule {
            if t_start < 0.0 || t_end < 0.0 || !t_start.is_finite() || !t_end.is_finite() {
                return Err(TsamError::InvalidParameter(format!(
                    "schedule endpoints must be >= 0, got {t_start} -> {t_end}"
                )));
            }
        }
        Ok(TiltConfig { t, delta_tilt, schedule })
    }

    /// Tilt in effect at `step` of a `total`-step run.
    pub fn t_at(&self, step: usize, total: usize) -> f64 {
        match self.schedule {
            TiltSchedule::Constant => self.t,
            TiltSchedule::Linear { t_start, t_end } => {
                if total <= 1 {
                    t_start
                } else {
                    t_start + (t_end - t_start) * step as f64 / (total - 1) as f64
                }
            }
        }
    }

    /// Sampler split in effect at `step`. Under a schedule the split keeps the
    /// configured `delta_tilt : t` ratio so `0 <= delta <= t` holds at every step.
    pub fn delta_at(&self, step: usize, total: usize) -> f64 {
        match self.schedule {
            TiltSchedule::Constant => self.delta_tilt,
            TiltSchedule::Linear { .. } => {
                if self.t > 0.0 {
                    (self.delta_tilt / self.t) * self.t_at(step, total)
                } else {
                    0.0
                }
            }
        }
    }
}

/// Loss and gradient of the objective at one perturbed parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct LossSample {
    pub loss: f64,
    pub gradient: Vec<f64>,
}

impl LossSample {
    pub fn new(loss: f64, gradient: Vec<f64>) -> Self {
        LossSample { loss, gradient }
    }
}

/// Tilted value, the Definition-3.1-style weights, and the tilted gradient of
/// one perturbation batch.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltedAggregate {
    /// Finite-sample estimate of the tilted risk at the full tilt `t`.
    pub value: f64,
    /// Normalized aggregation weights, computed at exponent `t - delta_tilt`.
    pub weights: Vec<f64>,
    /// Weighted average of the sample gradients.
    pub gradient: Vec<f64>,
}

fn check_losses(losses: &[f64]) -> Result<()> {
    if losses.is_empty() {
        return Err(TsamError::EmptySampleSet);
    }
    if losses.iter().any(|l| !l.is_finite()) {
        return Err(TsamError::NonFiniteLoss);
    }
    Ok(())
}

fn check_tilt(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(TsamError::InvalidParameter(format!("t must be >= 0, got {t}")));
    }
    Ok(())
}

/// Normalized `exp(score_j - max)` weights. Scores may be any finite reals.
fn softmax(scores: &[f64]) -> Vec<f64> {
    let m = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut w: Vec<f64> = scores.iter().map(|s| (s - m).exp()).collect();
    let z: f64 = w.iter().sum();
    for wi in &mut w {
        *wi /= z;
    }
    w
}

/// `(1/t) log(mean_j exp(t l_j))`, max-shifted. Exact arithmetic mean at t = 0.
pub fn log_mean_exp(losses: &[f64], t: f64) -> Result<f64> {
    check_losses(losses)?;
    check_tilt(t)?;
    let n = losses.len() as f64;
    if t == 0.0 {
        return Ok(losses.iter().sum::<f64>() / n);
    }
    let m = losses.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = losses.iter().map(|l| (t * (l - m)).exp()).sum();
    Ok(m + (s / n).ln() / t)
}

/// Weighted variant: `(1/t) log(sum_j w_j exp(t l_j))` for probability weights
/// `w` (nonnegative, summing to 1). The quadrature oracle and measure-weighted
/// estimators go through this path.
pub fn log_weighted_mean_exp(losses: &[f64], weights: &[f64], t: f64) -> Result<f64> {
    check_losses(losses)?;
    check_tilt(t)?;
    if weights.len() != losses.len() {
        return Err(TsamError::DimensionMismatch { expected: losses.len(), got: weights.len() });
    }
    if t == 0.0 {
        return Ok(losses.iter().zip(weights).map(|(l, w)| l * w).sum());
    }
    let m = losses.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = losses
        .iter()
        .zip(weights)
        .map(|(l, w)| w * (t * (l - m)).exp())
        .sum();
    Ok(m + s.ln() / t)
}

/// Normalized tilted weights `exp(t l_j) / sum_k exp(t l_k)`.
pub fn tilted_weights(losses: &[f64], t: f64) -> Result<Vec<f64>> {
    check_losses(losses)?;
    check_tilt(t)?;
    if t == 0.0 {
        return Ok(vec![1.0 / losses.len() as f64; losses.len()]);
    }
    let scores: Vec<f64> = losses.iter().map(|l| t * l).collect();
    Ok(softmax(&scores))
}

/// Tilted weights against arbitrary base probability weights:
/// `q_j = w_j exp(t l_j) / sum_k w_k exp(t l_k)`.
pub fn tilted_weights_with_base(losses: &[f64], base: &[f64], t: f64) -> Result<Vec<f64>> {
    check_losses(losses)?;
    check_tilt(t)?;
    if base.len() != losses.len() {
        return Err(TsamError::DimensionMismatch { expected: losses.len(), got: base.len() });
    }
    let m = losses.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut q: Vec<f64> = losses
        .iter()
        .zip(base)
        .map(|(l, w)| w * (t * (l - m)).exp())
        .collect();
    let z: f64 = q.iter().sum();
    for qi in &mut q {
        *qi /= z;
    }
    Ok(q)
}

/// Aggregation weights of the TSAM solver update: exponent `t - delta_tilt`
/// applied to the sample losses, then a weighted average of the gradients.
/// With `delta_tilt = 0` this is the finite-sample tilted gradient; with
/// `delta_tilt = t` it degenerates to the plain average.
pub fn tilted_gradient(samples: &[LossSample], t: f64, delta_tilt: f64) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(TsamError::EmptySampleSet);
    }
    check_tilt(t)?;
    if delta_tilt < 0.0 || delta_tilt > t {
        return Err(TsamError::InvalidParameter(format!(
            "delta_tilt must lie in [0, t], got {delta_tilt} with t = {t}"
        )));
    }
    let dim = samples[0].gradient.len();
    for s in samples {
        if s.gradient.len() != dim {
            return Err(TsamError::DimensionMismatch { expected: dim, got: s.gradient.len() });
        }
        if s.gradient.iter().any(|g| !g.is_finite()) {
            return Err(TsamError::NonFiniteLoss);
        }
    }
    let losses: Vec<f64> = samples.iter().map(|s| s.loss).collect();
    let w = tilted_weights(&losses, t - delta_tilt)?;
    let mut out = vec![0.0; dim];
    for (s, wj) in samples.iter().zip(&w) {
        for (o, g) in out.iter_mut().zip(&s.gradient) {
            *o += wj * g;
        }
    }
    Ok(out)
}

/// Value, weights, and gradient of a batch in one pass.
pub fn tilted_aggregate(samples: &[LossSample], t: f64, delta_tilt: f64) -> Result<TiltedAggregate> {
    let losses: Vec<f64> = samples.iter().map(|s| s.loss).collect();
    let value = log_mean_exp(&losses, t)?;
    let gradient = tilted_gradient(samples, t, delta_tilt)?;
    let weights = tilted_weights(&losses, t - delta_tilt)?;
    Ok(TiltedAggregate { value, weights, gradient })
}

/// t-weighted mean `E[exp(tX) X] / E[exp(tX)]` over the empirical distribution.
/// Any real `t` is accepted here; only the aggregation ops restrict to t >= 0.
pub fn t_weighted_mean(values: &[f64], t: f64) -> Result<f64> {
    check_losses(values)?;
    let scores: Vec<f64> = values.iter().map(|v| t * v).collect();
    let w = softmax(&scores);
    Ok(values.iter().zip(&w).map(|(v, wi)| v * wi).sum())
}

/// t-weighted second moment `E[exp(tX) X^2] / E[exp(tX)]`.
pub fn t_weighted_second_moment(values: &[f64], t: f64) -> Result<f64> {
    check_losses(values)?;
    let scores: Vec<f64> = values.iter().map(|v| t * v).collect();
    let w = softmax(&scores);
    Ok(values.iter().zip(&w).map(|(v, wi)| v * v * wi).sum())
}

/// t-weighted variance, clamped at zero against floating-point cancellation.
pub fn t_weighted_variance(values: &[f64], t: f64) -> Result<f64> {
    let mean = t_weighted_mean(values, t)?;
    let second = t_weighted_second_moment(values, t)?;
    Ok((second - mean * mean).max(0.0))
}

/// Weighted t-statistics against base probability weights (quadrature path).
pub fn t_weighted_mean_with_base(values: &[f64], base: &[f64], t: f64) -> Result<f64> {
    let q = tilted_weights_with_base(values, base, t)?;
    Ok(values.iter().zip(&q).map(|(v, qi)| v * qi).sum())
}

pub fn t_weighted_variance_with_base(values: &[f64], base: &[f64], t: f64) -> Result<f64> {
    let q = tilted_weights_with_base(values, base, t)?;
    let mean: f64 = values.iter().zip(&q).map(|(v, qi)| v * qi).sum();
    let second: f64 = values.iter().zip(&q).map(|(v, qi)| v * v * qi).sum();
    Ok((second - mean * mean).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_losses_any_tilt() {
        for t in [0.0, 0.5, 1.0, 100.0] {
            let v = log_mean_exp(&[3.25, 3.25, 3.25], t).unwrap();
            assert_relative_eq!(v, 3.25, max_relative = 1e-12);
        }
    }

    #[test]
    fn two_term_derived_value() {
        // Independent oracle: direct high-precision evaluation of
        // (1/1) ln((e^0 + e^1)/2) = ln((1 + e)/2).
        let expected = ((1.0 + std::f64::consts::E) / 2.0).ln();
        assert!((expected - 0.620115).abs() < 1e-6);
        let got = log_mean_exp(&[0.0, 1.0], 1.0).unwrap();
        assert_relative_eq!(got, expected, max_relative = 1e-12);
    }

    #[test]
    fn zero_tilt_is_arithmetic_mean() {
        assert_eq!(log_mean_exp(&[0.0, 1.0], 0.0).unwrap(), 0.5);
    }

    #[test]
    fn errors_on_bad_input() {
        assert!(matches!(log_mean_exp(&[], 1.0), Err(TsamError::EmptySampleSet)));
        assert!(matches!(
            log_mean_exp(&[1.0, f64::NAN], 1.0),
            Err(TsamError::NonFiniteLoss)
        ));
        assert!(matches!(
            log_mean_exp(&[1.0, f64::INFINITY], 1.0),
            Err(TsamError::NonFiniteLoss)
        ));
        assert!(log_mean_exp(&[1.0], -0.5).is_err());
    }

    #[test]
    fn survives_extreme_tilt_and_losses() {
        let v = log_mean_exp(&[1e6, 9.9e5], 1000.0).unwrap();
        assert!(v.is_finite());
        assert!(v <= 1e6 + 1e-6 && v >= 9.9e5);
    }

    #[test]
    fn weights_uniform_for_equal_losses() {
        let w = tilted_weights(&[2.0, 2.0, 2.0], 7.0).unwrap();
        for wi in w {
            assert_relative_eq!(wi, 1.0 / 3.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn weights_derived_two_point() {
        // e^0 = 1, e^{ln 2} = 2: weights 1/3, 2/3.
        let w = tilted_weights(&[0.0, std::f64::consts::LN_2], 1.0).unwrap();
        assert_relative_eq!(w[0], 1.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(w[1], 2.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn weights_uniform_at_zero_tilt() {
        let w = tilted_weights(&[5.0, -1.0, 0.3], 0.0).unwrap();
        for wi in w {
            assert_eq!(wi, 1.0 / 3.0);
        }
    }

    #[test]
    fn weights_monotone_in_loss() {
        let losses = [0.1, -0.4, 2.0, 0.1, 1.0];
        let w = tilted_weights(&losses, 3.0).unwrap();
        for i in 0..losses.len() {
            for j in 0..losses.len() {
                if losses[i] > losses[j] {
                    assert!(w[i] >= w[j]);
                }
            }
        }
    }

    #[test]
    fn gradient_symmetric_cancellation() {
        let samples = vec![
            LossSample::new(0.7, vec![-2.0, 1.5]),
            LossSample::new(0.7, vec![2.0, -1.5]),
        ];
        let g = tilted_gradient(&samples, 5.0, 0.0).unwrap();
        assert_relative_eq!(g[0], 0.0, epsilon = 1e-14);
        assert_relative_eq!(g[1], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn gradient_full_split_is_plain_average() {
        let samples = vec![
            LossSample::new(0.0, vec![1.0]),
            LossSample::new(10.0, vec![5.0]),
        ];
        let g = tilted_gradient(&samples, 4.0, 4.0).unwrap();
        assert_relative_eq!(g[0], 3.0, max_relative = 1e-14);
    }

    #[test]
    fn gradient_derived_two_point() {
        // Weights 1/3, 2/3 as above; 1/3 * 1 + 2/3 * 4 = 3.
        let samples = vec![
            LossSample::new(0.0, vec![1.0]),
            LossSample::new(std::f64::consts::LN_2, vec![4.0]),
        ];
        let g = tilted_gradient(&samples, 1.0, 0.0).unwrap();
        assert_relative_eq!(g[0], 3.0, max_relative = 1e-12);
    }

    #[test]
    fn gradient_rejects_mismatched_lengths() {
        let samples = vec![
            LossSample::new(0.0, vec![1.0, 2.0]),
            LossSample::new(0.0, vec![1.0]),
        ];
        assert!(matches!(
            tilted_gradient(&samples, 1.0, 0.0),
            Err(TsamError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn t_weighted_constant_values() {
        assert_eq!(t_weighted_mean(&[4.0, 4.0], 3.0).unwrap(), 4.0);
        assert_eq!(t_weighted_variance(&[4.0, 4.0], 3.0).unwrap(), 0.0);
    }

    #[test]
    fn t_weighted_standard_moments_at_zero() {
        assert_relative_eq!(t_weighted_mean(&[0.0, 1.0], 0.0).unwrap(), 0.5, max_relative = 1e-14);
        assert_relative_eq!(
            t_weighted_variance(&[0.0, 1.0], 0.0).unwrap(),
            0.25,
            max_relative = 1e-12
        );
    }

    #[test]
    fn t_weighted_concentrates_on_max() {
        let mean = t_weighted_mean(&[0.0, 1.0], 100.0).unwrap();
        let var = t_weighted_variance(&[0.0, 1.0], 100.0).unwrap();
        assert!((mean - 1.0).abs() < 1e-10, "mean {mean}");
        assert!(var < 1e-10, "var {var}");
    }

    #[test]
    fn aggregate_invariants() {
        let samples = vec![
            LossSample::new(0.3, vec![1.0, 0.0]),
            LossSample::new(-0.2, vec![0.0, 1.0]),
            LossSample::new(1.4, vec![-1.0, 2.0]),
        ];
        let agg = tilted_aggregate(&samples, 3.0, 1.0).unwrap();
        let sum: f64 = agg.weights.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        let losses: Vec<f64> = samples.iter().map(|s| s.loss).collect();
        let mean = losses.iter().sum::<f64>() / 3.0;
        let max = losses.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(agg.value >= mean - 1e-10 && agg.value <= max + 1e-10);
    }

    #[test]
    fn schedule_endpoints() {
        let cfg = TiltConfig::with_schedule(
            20.0,
            10.0,
            TiltSchedule::Linear { t_start: 0.0, t_end: 20.0 },
        )
        .unwrap();
        let total = 400;
        assert_eq!(cfg.t_at(0, total), 0.0);
        assert_relative_eq!(cfg.t_at(total - 1, total), 20.0, max_relative = 1e-12);
        // split keeps the delta : t ratio
        assert_relative_eq!(cfg.delta_at(total - 1, total), 10.0, max_relative = 1e-12);
        assert!(cfg.delta_at(100, total) <= cfg.t_at(100, total));
    }

    #[test]
    fn config_rejects_bad_split() {
        assert!(TiltConfig::new(-1.0, 0.0).is_err());
        assert!(TiltConfig::new(1.0, 1.5).is_err());
        assert!(TiltConfig::new(1.0, -0.1).is_err());
        assert!(TiltConfig::new(0.0, 0.0).is_ok());
    }
}
