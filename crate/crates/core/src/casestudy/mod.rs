//! Binary Gaussian-mixture classification with linear networks.
//!
//! Labels are fair `±1` coins and `X | Y = y ~ N(y μ₀, σ₀² I)`. The learner
//! outputs weights whose end-to-end product equals the label-weighted
//! sample mean `(1/n) Σ Y_i X_i`, and predictions are `tanh(W⊗L x)`. For
//! this setting the hierarchical KL bound depends only on the ranks of the
//! weight products and the Wasserstein bound on their Frobenius norms.

mod data;
mod funnel;
mod generror;
mod profile;
mod rotation;

pub use data::{fit_mean_classifier, sample_dataset, Dataset, GaussianMixtureSpec};
pub use funnel::{funnel_layer, sample_rotation_stacks, FunnelResult};
pub use generror::{
    empirical_gen_error, empirical_risk, population_risk, population_risk_monte_carlo,
    FixedWeights, FnTrainer, GenErrorEstimate, MeanClassifier, RiskMode, Trainer,
};
pub use profile::{
    kl_bound_profile, kl_bound_value, wasserstein_bound_profile, wasserstein_coefficient,
    BoundKind, BoundProfile,
};
pub use rotation::{build_rotation_stack, RotationStackConfig, ScaleMode};

/// Smallest index attaining the minimum.
pub(crate) fn argmin_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}
