//! Closed-form generalization-bound evaluators.
//!
//! All information quantities are in nats.

use serde::Serialize;

use crate::{Error, Result};

fn check_unit(x: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must lie in [0, 1], got {x}")))
    }
}

/// Per-sample mutual-information terms of a learning algorithm.
#[derive(Clone, Debug, PartialEq)]
pub struct MutualInfoInputs {
    /// `(I(X_i; W | Y_i), I(Y_i; W))` for each sample.
    samples: Vec<(f64, f64)>,
    sub_gaussian_sigma: f64,
    label_count: usize,
}

impl MutualInfoInputs {
    pub fn new(
        samples: Vec<(f64, f64)>,
        sub_gaussian_sigma: f64,
        label_count: usize,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::domain("at least one sample is required"));
        }
        if !(sub_gaussian_sigma > 0.0) {
            return Err(Error::domain("sub-Gaussian sigma must be positive"));
        }
        if label_count == 0 {
            return Err(Error::domain("label count must be at least 1"));
        }
        let log_k = (label_count as f64).ln();
        for (i, &(mx, my)) in samples.iter().enumerate() {
            if !(mx >= 0.0 && my >= 0.0) || !mx.is_finite() {
                return Err(Error::domain(format!("sample {i}: MI values must be >= 0")));
            }
            if my > log_k * (1.0 + 1e-12) {
                return Err(Error::domain(format!(
                    "sample {i}: I(Y;W) = {my} exceeds log K = {log_k}"
                )));
            }
        }
        Ok(Self {
            samples,
            sub_gaussian_sigma,
            label_count,
        })
    }

    /// The same pair for all `n` samples.
    pub fn uniform(
        n: usize,
        mi_x_given_y: f64,
        mi_y: f64,
        sigma: f64,
        label_count: usize,
    ) -> Result<Self> {
        Self::new(vec![(mi_x_given_y, mi_y); n], sigma, label_count)
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn sigma(&self) -> f64 {
        self.sub_gaussian_sigma
    }

    pub fn label_count(&self) -> usize {
        self.label_count
    }
}

/// `(σ√2 / n) Σ_i √(η·I(X_i;W|Y_i) + I(Y_i;W))`.
///
/// Shared by the Dropout, DropConnect and noisy-network bounds; only the
/// coefficient product `eta_product` differs between them.
pub fn contraction_bound(mi: &MutualInfoInputs, eta_product: f64) -> Result<f64> {
    check_unit(eta_product, "eta product")?;
    let total: f64 = mi
        .samples
        .iter()
        .map(|(mx, my)| (eta_product * mx + my).sqrt())
        .sum();
    Ok(mi.sub_gaussian_sigma * std::f64::consts::SQRT_2 / mi.n() as f64 * total)
}

/// Discrete latent layer with smallest joint probability `t_bar`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscreteLatentSpec {
    sigma: f64,
    label_count: usize,
    t_bar: f64,
    latent_size: usize,
}

impl DiscreteLatentSpec {
    /// `t_bar` is a supremum of minima each below `1/(|T|·K)`, so the upper
    /// end of its range is attainable.
    pub fn new(sigma: f64, label_count: usize, t_bar: f64, latent_size: usize) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::domain("sigma must be positive"));
        }
        if label_count == 0 || latent_size == 0 {
            return Err(Error::domain(
                "label count and latent size must be positive",
            ));
        }
        let upper = 1.0 / (latent_size as f64 * label_count as f64);
        if !(t_bar > 0.0 && t_bar <= upper) {
            return Err(Error::domain(format!(
                "t_bar must lie in (0, {upper}], got {t_bar}"
            )));
        }
        Ok(Self {
            sigma,
            label_count,
            t_bar,
            latent_size,
        })
    }
}

/// `√(2σ² log(K² / t_bar))`.
pub fn discrete_latent_bound(spec: &DiscreteLatentSpec) -> f64 {
    let k = spec.label_count as f64;
    (2.0 * spec.sigma * spec.sigma * (k * k / spec.t_bar).ln())
        .max(0.0)
        .sqrt()
}

/// Worst-case MI terms `I_0 = 0 <= I_1 <= ... <= I_{d0}` over coordinate subsets.
#[derive(Clone, Debug, PartialEq)]
pub struct MiubInputs {
    i_k: Vec<f64>,
}

impl MiubInputs {
    pub fn new(i_k: Vec<f64>) -> Result<Self> {
        if i_k.first() != Some(&0.0) {
            return Err(Error::domain("I_0 must be exactly 0"));
        }
        if i_k.windows(2).any(|w| !(w[1] >= w[0]) || !w[1].is_finite()) {
            return Err(Error::domain("I_k must be finite and nondecreasing"));
        }
        Ok(Self { i_k })
    }

    pub fn d0(&self) -> usize {
        self.i_k.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.i_k
    }
}

/// `Σ_k C(d0,k) δ^{d0-k} (1-δ)^k I_k`: the expectation of `I_K` for
/// `K ~ Binomial(d0, 1 - δ)` kept coordinates.
pub fn miub_dropout(inputs: &MiubInputs, delta0: f64) -> Result<f64> {
    check_unit(delta0, "input dropout delta")?;
    let d0 = inputs.d0();
    let keep = 1.0 - delta0;
    let mut binom = 1.0_f64;
    let mut total = 0.0;
    for (k, &ik) in inputs.i_k.iter().enumerate() {
        if k > 0 {
            binom = binom * (d0 - k + 1) as f64 / k as f64;
        }
        total += binom * delta0.powi((d0 - k) as i32) * keep.powi(k as i32) * ik;
    }
    Ok(total)
}

/// Inputs of the distribution-free Gibbs-algorithm bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GibbsSpec {
    pub alpha: f64,
    pub gamma: f64,
    pub n: usize,
    pub eta_product: f64,
}

impl GibbsSpec {
    pub fn new(alpha: f64, gamma: f64, n: usize, eta_product: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::domain("inverse temperature must be positive"));
        }
        check_unit(gamma, "gamma")?;
        check_unit(eta_product, "eta product")?;
        if n == 0 {
            return Err(Error::domain("sample count must be at least 1"));
        }
        Ok(Self {
            alpha,
            gamma,
            n,
            eta_product,
        })
    }
}

/// `(α / 4n) √(γ·η + 1 - γ)`.
pub fn gibbs_bound(spec: &GibbsSpec) -> f64 {
    spec.alpha / (4.0 * spec.n as f64) * (spec.gamma * spec.eta_product + 1.0 - spec.gamma).sqrt()
}

/// Gibbs bound maximized over `γ ∈ {0, 1}`, valid without knowing `γ`.
pub fn gibbs_bound_worst_case(alpha: f64, n: usize, eta_product: f64) -> Result<f64> {
    let a = gibbs_bound(&GibbsSpec::new(alpha, 0.0, n, eta_product)?);
    let b = gibbs_bound(&GibbsSpec::new(alpha, 1.0, n, eta_product)?);
    Ok(a.max(b))
}

/// Finite parameter space `[B]^{d_1 x d_0} x ... x [B]^{d_L x d_{L-1}}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteParamSpec {
    dims: Vec<usize>,
    b: usize,
}

impl FiniteParamSpec {
    pub fn new(dims: Vec<usize>, b: usize) -> Result<Self> {
        if b < 2 {
            return Err(Error::domain(format!(
                "parameter alphabet size B must be >= 2, got {b}"
            )));
        }
        Self::new_relaxed(dims, b)
    }

    /// Accepts `B = 1` (singleton parameter space) for limit checks.
    #[doc(hidden)]
    pub fn new_relaxed(dims: Vec<usize>, b: usize) -> Result<Self> {
        if dims.len() < 2 || dims.contains(&0) {
            return Err(Error::domain("need at least two positive widths"));
        }
        if b == 0 {
            return Err(Error::domain("B must be positive"));
        }
        Ok(Self { dims, b })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `Σ_l d_l d_{l-1}`.
    pub fn parameter_count(&self) -> usize {
        self.dims.windows(2).map(|w| w[0] * w[1]).sum()
    }
}

/// Entropy bound `H(W) <= (Σ_l d_l d_{l-1}) log B` on `I(X_i; W | Y_i)`.
pub fn finite_param_mi_ub(spec: &FiniteParamSpec) -> f64 {
    spec.parameter_count() as f64 * (spec.b as f64).ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundComparison {
    WassersteinTighter,
    Inconclusive,
}

/// Sufficient condition `ρ₀ K² <= A` for the Wasserstein bound to beat the
/// last-layer KL bound. Only this direction is known, hence `Inconclusive`
/// otherwise.
pub fn kl_vs_wasserstein_flag(
    rho0: f64,
    label_count: usize,
    loss_range: f64,
) -> Result<BoundComparison> {
    if !(rho0 > 0.0 && loss_range > 0.0) {
        return Err(Error::domain("rho0 and loss range must be positive"));
    }
    let k = label_count as f64;
    Ok(if rho0 * k * k <= loss_range {
        BoundComparison::WassersteinTighter
    } else {
        BoundComparison::Inconclusive
    })
}
