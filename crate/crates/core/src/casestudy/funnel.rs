use rayon::prelude::*;
use serde::Serialize;

use super::{
    argmin_lowest, build_rotation_stack, fit_mean_classifier, sample_dataset, GaussianMixtureSpec,
    RotationStackConfig,
};
use crate::numerics::{SeededRng, WeightStack};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FunnelResult {
    /// `argmin_l` of the sample mean of `‖W⊗l‖²_F` (lowest index on ties).
    pub l_star: usize,
    /// Sample means of `‖W⊗l‖²_F` for `l = 0..=L`.
    pub sample_means: Vec<f64>,
    /// Sample means of `(1 ∨ ∏_{j>l} ‖W_j‖²_op) ‖W⊗l‖²_F`.
    pub weighted_means: Vec<f64>,
    pub weighted_l_star: usize,
    /// Fraction of stacks with some trailing scale product above 1.
    pub tail_violation_rate: f64,
    pub models: usize,
}

struct Partial {
    plain: Vec<f64>,
    weighted: Vec<f64>,
    violations: usize,
}

/// Locates the generalization funnel layer of the rotation-stack learner.
///
/// Dataset `j` is drawn from `rng.fork(j).fork(0)` and its `k`-th stack
/// from `rng.fork(j).fork(k + 1)`; per-dataset sums are combined in dataset
/// order, so the result does not depend on the thread count.
pub fn funnel_layer(
    spec: &GaussianMixtureSpec,
    cfg: &RotationStackConfig,
    datasets: usize,
    stacks_per_dataset: usize,
    rng: &SeededRng,
) -> Result<FunnelResult> {
    if datasets == 0 || stacks_per_dataset == 0 {
        return Err(crate::Error::domain(
            "funnel layer needs at least one dataset and one stack per dataset",
        ));
    }
    let depth = cfg.depth();
    let partials = (0..datasets)
        .into_par_iter()
        .map(|j| -> Result<Partial> {
            let trial = rng.fork(j as u64);
            let data = sample_dataset(spec, &mut trial.fork(0));
            let target = fit_mean_classifier(&data);
            let mut part = Partial {
                plain: vec![0.0; depth + 1],
                weighted: vec![0.0; depth + 1],
                violations: 0,
            };
            for k in 0..stacks_per_dataset {
                let stack = build_rotation_stack(cfg, &target, &mut trial.fork(k as u64 + 1))?;
                let mut violated = false;
                for l in 0..=depth {
                    let f2 = stack.product_frobenius()[l].powi(2);
                    let tail = stack.tail_operator_sq(l);
                    violated |= tail > 1.0;
                    part.plain[l] += f2;
                    part.weighted[l] += tail.max(1.0) * f2;
                }
                part.violations += violated as usize;
            }
            Ok(part)
        })
        .collect::<Result<Vec<_>>>()?;

    let models = datasets * stacks_per_dataset;
    let mut plain = vec![0.0; depth + 1];
    let mut weighted = vec![0.0; depth + 1];
    let mut violations = 0;
    for p in &partials {
        for l in 0..=depth {
            plain[l] += p.plain[l];
            weighted[l] += p.weighted[l];
        }
        violations += p.violations;
    }
    let m = models as f64;
    plain.iter_mut().for_each(|v| *v /= m);
    weighted.iter_mut().for_each(|v| *v /= m);
    Ok(FunnelResult {
        l_star: argmin_lowest(&plain),
        weighted_l_star: argmin_lowest(&weighted),
        sample_means: plain,
        weighted_means: weighted,
        tail_violation_rate: violations as f64 / m,
        models,
    })
}

/// All `datasets · stacks_per_dataset` rotation stacks, dataset-major, drawn
/// with the same stream layout as [`funnel_layer`].
pub fn sample_rotation_stacks(
    spec: &GaussianMixtureSpec,
    cfg: &RotationStackConfig,
    datasets: usize,
    stacks_per_dataset: usize,
    rng: &SeededRng,
) -> Result<Vec<WeightStack>> {
    let per_dataset = (0..datasets)
        .into_par_iter()
        .map(|j| -> Result<Vec<WeightStack>> {
            let trial = rng.fork(j as u64);
            let data = sample_dataset(spec, &mut trial.fork(0));
            let target = fit_mean_classifier(&data);
            (0..stacks_per_dataset)
                .map(|k| build_rotation_stack(cfg, &target, &mut trial.fork(k as u64 + 1)))
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_dataset.into_iter().flatten().collect())
}
