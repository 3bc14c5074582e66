//! Exponential-family losses `A(theta) - theta . t_bar`.
//!
//! `A` is the convex log-partition function and `t_bar` the mean sufficient
//! statistic of the data. The flatness-preference theorem is stated for this
//! family, so the gap-monotonicity checks construct their instances here.

use super::Landscape;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlmLink {
    /// `A(theta) = 1/2 theta . theta`; identity gradient, unit Hessian.
    Quadratic,
    /// `A(theta) = sum_k log(1 + exp(theta_k))`; sigmoid gradient.
    Logistic,
}

impl GlmLink {
    pub fn value(&self, theta: &[f64]) -> f64 {
        match self {
            GlmLink::Quadratic => 0.5 * theta.iter().map(|x| x * x).sum::<f64>(),
            // log(1 + e^x) = max(x, 0) + log1p(e^{-|x|}) avoids overflow.
            GlmLink::Logistic => theta
                .iter()
                .map(|&x| x.max(0.0) + (-x.abs()).exp().ln_1p())
                .sum(),
        }
    }

    pub fn grad(&self, theta: &[f64]) -> Vec<f64> {
        match self {
            GlmLink::Quadratic => theta.to_vec(),
            GlmLink::Logistic => theta.iter().map(|&x| sigmoid(x)).collect(),
        }
    }

    /// Diagonal of the Hessian of `A` (both links have diagonal Hessians).
    pub fn hess_diag(&self, theta: &[f64]) -> Vec<f64> {
        match self {
            GlmLink::Quadratic => vec![1.0; theta.len()],
            GlmLink::Logistic => theta
                .iter()
                .map(|&x| {
                    let s = sigmoid(x);
                    s * (1.0 - s)
                })
                .collect(),
        }
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone)]
pub struct GlmLandscape {
    link: GlmLink,
    t_bar: Vec<f64>,
}

impl GlmLandscape {
    pub fn new(link: GlmLink, t_bar: Vec<f64>) -> Self {
        GlmLandscape { link, t_bar }
    }

    pub fn link(&self) -> GlmLink {
        self.link
    }

    pub fn t_bar(&self) -> &[f64] {
        &self.t_bar
    }
}

impl Landscape for GlmLandscape {
    fn dim(&self) -> usize {
        self.t_bar.len()
    }

    fn eval(&self, theta: &[f64]) -> f64 {
        self.link.value(theta) - theta.iter().zip(&self.t_bar).map(|(x, t)| x * t).sum::<f64>()
    }

    fn grad(&self, theta: &[f64]) -> Vec<f64> {
        self.link
            .grad(theta)
            .iter()
            .zip(&self.t_bar)
            .map(|(a, t)| a - t)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscapes::max_grad_check_error;
    use approx::assert_relative_eq;

    #[test]
    fn quadratic_link_is_strongly_convex_shifted_norm() {
        let g = GlmLandscape::new(GlmLink::Quadratic, vec![1.0, -2.0]);
        // 1/2 (1 + 4) - (1 * 1 + (-1) * (-2)) = 2.5 - 3 = -0.5
        assert_relative_eq!(g.eval(&[1.0, -1.0]), -0.5, max_relative = 1e-14);
        assert_eq!(g.grad(&[1.0, -1.0]), vec![0.0, 1.0]);
    }

    #[test]
    fn logistic_link_gradients_match_fd() {
        let g = GlmLandscape::new(GlmLink::Logistic, vec![0.7, 0.3]);
        let err = max_grad_check_error(&g, -4.0, 6.0, 100, 1e-6, 5);
        assert!(err < 1e-5, "max rel grad error {err}");
    }

    #[test]
    fn logistic_link_is_stable_for_large_inputs() {
        let v = GlmLink::Logistic.value(&[800.0, -800.0]);
        assert!(v.is_finite());
        assert_relative_eq!(v, 800.0, max_relative = 1e-12);
        let h = GlmLink::Logistic.hess_diag(&[0.0]);
        assert_relative_eq!(h[0], 0.25, max_relative = 1e-12);
    }
}
