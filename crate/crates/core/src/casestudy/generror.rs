use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fit_mean_classifier, sample_dataset, Dataset, GaussianMixtureSpec};
use crate::numerics::{GaussHermite, SeededRng};
use crate::{Error, Result};

/// Maps a training set to the end-to-end linear weights `W⊗Lᵀ`.
pub trait Trainer: Sync {
    fn fit(&self, data: &Dataset) -> Vec<f64>;
}

/// Label-weighted sample mean `(1/n) Σ Y_i X_i`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MeanClassifier;

impl Trainer for MeanClassifier {
    fn fit(&self, data: &Dataset) -> Vec<f64> {
        fit_mean_classifier(data)
    }
}

/// Ignores the data.
#[derive(Clone, Debug)]
pub struct FixedWeights(pub Vec<f64>);

impl Trainer for FixedWeights {
    fn fit(&self, _data: &Dataset) -> Vec<f64> {
        self.0.clone()
    }
}

/// Adapter for closures.
pub struct FnTrainer<F>(pub F);

impl<F> Trainer for FnTrainer<F>
where
    F: Fn(&Dataset) -> Vec<f64> + Sync,
{
    fn fit(&self, data: &Dataset) -> Vec<f64> {
        (self.0)(data)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RiskMode {
    /// 64-node Gauss-Hermite rule on the law of `w·X` given `Y`.
    #[default]
    Quadrature,
    /// Average loss over this many fresh samples.
    MonteCarlo(usize),
}

fn loss(w: &[f64], x: &[f64], y: f64) -> f64 {
    let score: f64 = w.iter().zip(x).map(|(a, b)| a * b).sum();
    (y - score.tanh()).powi(2)
}

pub fn empirical_risk(w: &[f64], data: &Dataset) -> f64 {
    let total: f64 = (0..data.len())
        .map(|i| {
            let (x, y) = data.sample(i);
            loss(w, x, y)
        })
        .sum();
    total / data.len() as f64
}

/// `E[(Y - tanh(w·X))²]`; given `Y = y`, `w·X ~ N(y w·μ₀, σ₀² ‖w‖²)`.
pub fn population_risk(spec: &GaussianMixtureSpec, w: &[f64], rule: &GaussHermite) -> f64 {
    let proj: f64 = w.iter().zip(spec.mu0()).map(|(a, b)| a * b).sum();
    let sd = spec.sigma0() * w.iter().map(|a| a * a).sum::<f64>().sqrt();
    [1.0, -1.0]
        .iter()
        .map(|&y| 0.5 * rule.normal_expectation(y * proj, sd, |s| (y - s.tanh()).powi(2)))
        .sum()
}

/// Population risk estimated from `samples` fresh draws.
pub fn population_risk_monte_carlo(
    spec: &GaussianMixtureSpec,
    w: &[f64],
    samples: usize,
    rng: &mut SeededRng,
) -> f64 {
    let mut x = vec![0.0; spec.d0()];
    let mut total = 0.0;
    for _ in 0..samples {
        let y = if rng.random::<bool>() { 1.0 } else { -1.0 };
        for (xi, m) in x.iter_mut().zip(spec.mu0()) {
            let z: f64 = rng.sample(StandardNormal);
            *xi = y * m + spec.sigma0() * z;
        }
        total += loss(w, &x, y);
    }
    total / samples as f64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenErrorEstimate {
    pub estimate: f64,
    pub std_error: f64,
    /// Population minus empirical risk for each dataset draw.
    pub per_dataset: Vec<f64>,
    /// Trained weights for each dataset draw.
    pub weights: Vec<Vec<f64>>,
}

/// Monte-Carlo estimate of `E[L_P(W) - L_E(W, D_n)]` with loss
/// `(y - tanh(w·x))²`.
///
/// Dataset `j` is drawn from `rng.fork(j).fork(0)`; Monte-Carlo test
/// samples for it come from `rng.fork(j).fork(1)`.
pub fn empirical_gen_error(
    spec: &GaussianMixtureSpec,
    trainer: &dyn Trainer,
    datasets: usize,
    rng: &SeededRng,
    risk_mode: RiskMode,
) -> Result<GenErrorEstimate> {
    if datasets < 2 {
        return Err(Error::domain(
            "need at least 2 dataset draws for a standard error",
        ));
    }
    if let RiskMode::MonteCarlo(0) = risk_mode {
        return Err(Error::domain(
            "Monte-Carlo risk needs at least one test sample",
        ));
    }
    let rule = GaussHermite::new(64);
    let draws: Vec<(f64, Vec<f64>)> = (0..datasets)
        .into_par_iter()
        .map(|j| {
            let trial = rng.fork(j as u64);
            let data = sample_dataset(spec, &mut trial.fork(0));
            let w = trainer.fit(&data);
            let pop = match risk_mode {
                RiskMode::Quadrature => population_risk(spec, &w, &rule),
                RiskMode::MonteCarlo(m) => {
                    population_risk_monte_carlo(spec, &w, m, &mut trial.fork(1))
                }
            };
            (pop - empirical_risk(&w, &data), w)
        })
        .collect();
    let (per_dataset, weights): (Vec<f64>, Vec<Vec<f64>>) = draws.into_iter().unzip();
    let m = datasets as f64;
    let mean = per_dataset.iter().sum::<f64>() / m;
    let var = per_dataset.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (m - 1.0);
    Ok(GenErrorEstimate {
        estimate: mean,
        std_error: (var / m).sqrt(),
        per_dataset,
        weights,
    })
}
