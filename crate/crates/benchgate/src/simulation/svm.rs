//! From-scratch linear SVM: L2-regularized hinge loss solved by dual
//! coordinate descent.
//!
//! The visiting order is a single seeded permutation reused on every
//! sweep, so training is a pure function of (data, params, seed). The bias
//! is learned as an augmented constant feature.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream;

/// Dense row-major feature matrix with binary labels.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub features: Vec<f64>,
    pub dim: usize,
    pub labels: Vec<bool>,
}

impl Dataset {
    pub fn new(features: Vec<f64>, dim: usize, labels: Vec<bool>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if features.len() != dim * labels.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} feature values for {} items of dim {dim}",
                features.len(),
                labels.len()
            )));
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("features must be finite"));
        }
        Ok(Self {
            features,
            dim,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    /// Copy out the rows at `indices`.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let mut features = Vec::with_capacity(indices.len() * self.dim);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            features,
            dim: self.dim,
            labels,
        }
    }
}

/// Linear decision function: score(x) = w . x + bias.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearModel {
    pub fn score(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.weights.len());
        let mut s = self.bias;
        for (w, v) in self.weights.iter().zip(x) {
            s += w * v;
        }
        s
    }

    pub fn scores(&self, data: &Dataset) -> Vec<f64> {
        (0..data.len()).map(|i| self.score(data.row(i))).collect()
    }
}

/// Solver hyperparameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SvmParams {
    pub c: f64,
    pub tolerance: f64,
    pub max_iters: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            tolerance: 1e-4,
            max_iters: 10_000,
        }
    }
}

/// A trained model plus convergence status. Non-convergence within
/// `max_iters` is a warning, not an error; the model is still usable.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: LinearModel,
    pub converged: bool,
    pub sweeps: usize,
}

/// Train by dual coordinate descent on the L1-loss SVC dual:
/// min 1/2 a^T Q a - e^T a subject to 0 <= a_i <= C.
pub fn train_linear_svm(data: &Dataset, params: &SvmParams, seed: u64) -> Result<TrainOutcome> {
    let n = data.len();
    if n == 0 {
        return Err(Error::invalid("training set is empty"));
    }
    let n_pos = data.labels.iter().filter(|&&l| l).count();
    if n_pos == 0 || n_pos == n {
        return Err(Error::SingleClass);
    }
    if !(params.c > 0.0 && params.c.is_finite()) {
        return Err(Error::invalid(format!("C = {} must be positive", params.c)));
    }

    let dim = data.dim;
    let y: Vec<f64> = data.labels.iter().map(|&l| if l { 1.0 } else { -1.0 }).collect();
    // augmented bias feature of 1.0 per item
    let q_diag: Vec<f64> = (0..n)
        .map(|i| data.row(i).iter().map(|v| v * v).sum::<f64>() + 1.0)
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream(seed, 0));

    let mut alpha = vec![0.0f64; n];
    let mut w = vec![0.0f64; dim];
    let mut bias = 0.0f64;
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < params.max_iters {
        sweeps += 1;
        let mut pg_max = f64::NEG_INFINITY;
        let mut pg_min = f64::INFINITY;
        for &i in &order {
            let xi = data.row(i);
            let mut dot = bias;
            for (wv, xv) in w.iter().zip(xi) {
                dot += wv * xv;
            }
            let g = y[i] * dot - 1.0;
            let pg = if alpha[i] == 0.0 {
                g.min(0.0)
            } else if alpha[i] == params.c {
                g.max(0.0)
            } else {
                g
            };
            pg_max = pg_max.max(pg);
            pg_min = pg_min.min(pg);
            if pg.abs() > 1e-12 {
                let old = alpha[i];
                alpha[i] = (old - g / q_diag[i]).clamp(0.0, params.c);
                let delta = (alpha[i] - old) * y[i];
                for (wv, xv) in w.iter_mut().zip(xi) {
                    *wv += delta * xv;
                }
                bias += delta;
            }
        }
        if pg_max - pg_min < params.tolerance {
            converged = true;
            break;
        }
    }
    Ok(TrainOutcome {
        model: LinearModel { weights: w, bias },
        converged,
        sweeps,
    })
}
