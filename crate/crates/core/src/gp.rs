//! Exact Gaussian-process regression with a squared-exponential kernel and a
//! constant prior mean. Used to smooth sensitivity grids.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Diagonal jitter tried in turn when the kernel matrix is not numerically
/// positive definite.
const JITTER: [f64; 6] = [0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GpConfig {
    pub kernel_variance: f64,
    /// Squared lengthscale `ℓ²`; the kernel is `v·exp(−r²/(2ℓ²))`.
    pub lengthscale_sq: f64,
    pub prior_mean: f64,
    pub noise_variance: f64,
}

impl Default for GpConfig {
    fn default() -> Self {
        Self { kernel_variance: 1e-3, lengthscale_sq: 0.25, prior_mean: 0.60, noise_variance: 1e-4 }
    }
}

impl GpConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.kernel_variance > 0.0
            && self.lengthscale_sq > 0.0
            && self.noise_variance >= 0.0
            && self.prior_mean.is_finite()
            && self.kernel_variance.is_finite()
            && self.lengthscale_sq.is_finite()
            && self.noise_variance.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(alloc::format!("invalid GP configuration {self:?}")))
        }
    }

    pub fn kernel<const D: usize>(&self, a: &[f64; D], b: &[f64; D]) -> f64 {
        let r2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        self.kernel_variance * (-r2 / (2.0 * self.lengthscale_sq)).exp()
    }
}

/// Posterior of a fitted GP; evaluates the posterior mean anywhere.
#[derive(Clone, Debug)]
pub struct GpPosterior<const D: usize> {
    cfg: GpConfig,
    inputs: Vec<[f64; D]>,
    weights: Vec<f64>,
    /// Jitter that made the factorisation succeed.
    pub jitter: f64,
}

/// Kernel matrix of `inputs` without noise.
pub fn kernel_matrix<const D: usize>(cfg: &GpConfig, inputs: &[[f64; D]]) -> DMatrix<f64> {
    let n = inputs.len();
    DMatrix::from_fn(n, n, |i, j| cfg.kernel(&inputs[i], &inputs[j]))
}

pub fn fit<const D: usize>(cfg: &GpConfig, inputs: &[[f64; D]], targets: &[f64]) -> Result<GpPosterior<D>> {
    cfg.validate()?;
    if inputs.len() != targets.len() {
        return Err(Error::InvalidParameter(alloc::format!("{} GP inputs but {} targets", inputs.len(), targets.len())));
    }
    let n = inputs.len();
    if n == 0 {
        return Ok(GpPosterior { cfg: *cfg, inputs: Vec::new(), weights: Vec::new(), jitter: 0.0 });
    }
    let k = kernel_matrix(cfg, inputs);
    let residual = DVector::from_iterator(n, targets.iter().map(|y| y - cfg.prior_mean));
    for jitter in JITTER {
        let mut a = k.clone();
        for i in 0..n {
            a[(i, i)] += cfg.noise_variance + jitter;
        }
        if let Some(chol) = a.cholesky() {
            let weights = chol.solve(&residual);
            return Ok(GpPosterior { cfg: *cfg, inputs: inputs.to_vec(), weights: weights.iter().copied().collect(), jitter });
        }
    }
    Err(Error::CholeskyFailed(JITTER[JITTER.len() - 1]))
}

impl<const D: usize> GpPosterior<D> {
    pub fn mean(&self, x: &[f64; D]) -> f64 {
        let shift: f64 = self.inputs.iter().zip(&self.weights).map(|(xi, w)| self.cfg.kernel(x, xi) * w).sum();
        self.cfg.prior_mean + shift
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }
}
