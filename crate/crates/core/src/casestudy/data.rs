use rand::Rng;
use rand_distr::StandardNormal;

use crate::numerics::{MatrixR, SeededRng};
use crate::{Error, Result};

/// Mixture `P_Y = Unif{±1}`, `X | Y = y ~ N(y μ₀, σ₀² I_{d0})`, with `n` samples.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianMixtureSpec {
    mu0: Vec<f64>,
    sigma0: f64,
    n: usize,
}

impl GaussianMixtureSpec {
    pub fn new(mu0: Vec<f64>, sigma0: f64, n: usize) -> Result<Self> {
        if mu0.is_empty() || mu0.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("mu0 must be a nonempty finite vector"));
        }
        if !(sigma0 > 0.0 && sigma0.is_finite()) {
            return Err(Error::domain(format!(
                "sigma0 must be positive, got {sigma0}"
            )));
        }
        if n < 2 {
            return Err(Error::domain(format!(
                "sample size must be at least 2, got {n}"
            )));
        }
        Ok(Self { mu0, sigma0, n })
    }

    pub fn mu0(&self) -> &[f64] {
        &self.mu0
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn d0(&self) -> usize {
        self.mu0.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(self.mu0.clone(), self.sigma0, n)
    }
}

/// Features (`n x d0`) and `±1` labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    features: MatrixR,
    labels: Vec<i8>,
}

impl Dataset {
    pub fn new(features: MatrixR, labels: Vec<i8>) -> Result<Self> {
        if features.rows() != labels.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} feature rows but {} labels",
                features.rows(),
                labels.len()
            )));
        }
        if labels.iter().any(|y| *y != 1 && *y != -1) {
            return Err(Error::domain("labels must be +1 or -1"));
        }
        Ok(Self { features, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    pub fn features(&self) -> &MatrixR {
        &self.features
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn sample(&self, i: usize) -> (&[f64], f64) {
        (self.features.row(i), self.labels[i] as f64)
    }
}

pub fn sample_dataset(spec: &GaussianMixtureSpec, rng: &mut SeededRng) -> Dataset {
    let d0 = spec.d0();
    let mut data = Vec::with_capacity(spec.n * d0);
    let mut labels = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let y: i8 = if rng.random::<bool>() { 1 } else { -1 };
        labels.push(y);
        for &m in &spec.mu0 {
            let z: f64 = rng.sample(StandardNormal);
            data.push(y as f64 * m + spec.sigma0 * z);
        }
    }
    let features = MatrixR::new(spec.n, d0, data).expect("sampled features are finite");
    Dataset { features, labels }
}

/// `(1/n) Σ Y_i X_i`, the transpose of the end-to-end product `W⊗L`.
pub fn fit_mean_classifier(data: &Dataset) -> Vec<f64> {
    let mut acc = vec![0.0; data.dim()];
    for i in 0..data.len() {
        let (x, y) = data.sample(i);
        for (a, v) in acc.iter_mut().zip(x) {
            *a += y * v;
        }
    }
    let n = data.len() as f64;
    acc.iter().map(|a| a / n).collect()
}
