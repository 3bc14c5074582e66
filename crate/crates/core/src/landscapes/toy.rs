//! Fixed-form 1-D toys and small closed-form landscapes.

use super::Landscape;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// `2 sin(4 pi theta) / (2 theta) + 0.005 (theta - 1)^2`, studied on
/// `theta in (0.2, 2.5)`: a row of local minima whose basins get flatter to
/// the right, with a mild quadratic envelope pulling toward `theta = 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ToySine1D;

impl Landscape for ToySine1D {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, theta: &[f64]) -> f64 {
        let x = theta[0];
        2.0 * (FOUR_PI * x).sin() / (2.0 * x) + 0.005 * (x - 1.0) * (x - 1.0)
    }

    fn grad(&self, theta: &[f64]) -> Vec<f64> {
        let x = theta[0];
        let d = FOUR_PI * (FOUR_PI * x).cos() / x - (FOUR_PI * x).sin() / (x * x)
            + 0.01 * (x - 1.0);
        vec![d]
    }
}

/// `|theta - 1| - 0.01` for `theta <= 2`, `(theta - 3)^2` otherwise. The kink
/// minimum at 1 is sharp; the parabola bottom at 3 is flat. Subgradient 0 at
/// the kink; the jump at 2 takes the left branch.
#[derive(Debug, Clone, Copy, Default)]
pub struct ToyPiecewise1D;

impl Landscape for ToyPiecewise1D {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, theta: &[f64]) -> f64 {
        let x = theta[0];
        if x <= 2.0 {
            (x - 1.0).abs() - 0.01
        } else {
            (x - 3.0) * (x - 3.0)
        }
    }

    fn grad(&self, theta: &[f64]) -> Vec<f64> {
        let x = theta[0];
        let d = if x <= 2.0 {
            if x == 1.0 {
                0.0
            } else if x < 1.0 {
                -1.0
            } else {
                1.0
            }
        } else {
            2.0 * (x - 3.0)
        };
        vec![d]
    }
}

/// `1/2 sum_i h_i theta_i^2` with Hessian `diag(h)`.
#[derive(Debug, Clone)]
pub struct Quadratic {
    hess_diag: Vec<f64>,
}

impl Quadratic {
    pub fn new(hess_diag: Vec<f64>) -> Self {
        Quadratic { hess_diag }
    }

    /// 1-D parabola `1/2 h theta^2`.
    pub fn scalar(h: f64) -> Self {
        Quadratic { hess_diag: vec![h] }
    }

    pub fn hess_diag(&self) -> &[f64] {
        &self.hess_diag
    }
}

impl Landscape for Quadratic {
    fn dim(&self) -> usize {
        self.hess_diag.len()
    }

    fn eval(&self, theta: &[f64]) -> f64 {
        0.5 * theta.iter().zip(&self.hess_diag).map(|(x, h)| h * x * x).sum::<f64>()
    }

    fn grad(&self, theta: &[f64]) -> Vec<f64> {
        theta.iter().zip(&self.hess_diag).map(|(x, h)| h * x).collect()
    }
}

/// `sum_i s_i theta_i`; constant gradient.
#[derive(Debug, Clone)]
pub struct Linear {
    slope: Vec<f64>,
}

impl Linear {
    pub fn new(slope: Vec<f64>) -> Self {
        Linear { slope }
    }
}

impl Landscape for Linear {
    fn dim(&self) -> usize {
        self.slope.len()
    }

    fn eval(&self, theta: &[f64]) -> f64 {
        theta.iter().zip(&self.slope).map(|(x, s)| s * x).sum()
    }

    fn grad(&self, _theta: &[f64]) -> Vec<f64> {
        self.slope.clone()
    }
}

/// Constant loss; zero gradient everywhere.
#[derive(Debug, Clone)]
pub struct Constant {
    pub value: f64,
    pub dim: usize,
}

impl Constant {
    pub fn new(value: f64, dim: usize) -> Self {
        Constant { value, dim }
    }
}

impl Landscape for Constant {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, _theta: &[f64]) -> f64 {
        self.value
    }

    fn grad(&self, _theta: &[f64]) -> Vec<f64> {
        vec![0.0; self.dim]
    }
}
