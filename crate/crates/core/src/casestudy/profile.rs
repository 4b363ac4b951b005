use serde::Serialize;

use super::{argmin_lowest, GaussianMixtureSpec};
use crate::numerics::WeightStack;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Kl,
    Wasserstein,
}

/// Per-layer bound values `B(0..=L)` and the layer attaining the minimum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundProfile {
    pub kind: BoundKind,
    pub values: Vec<f64>,
    /// Per-layer sample statistic behind each value: mean rank for KL,
    /// mean weighted squared Frobenius norm for Wasserstein.
    pub statistics: Vec<f64>,
    pub argmin: usize,
    pub trials: usize,
    pub seed: Option<u64>,
}

impl BoundProfile {
    pub fn min_value(&self) -> f64 {
        self.values[self.argmin]
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("profiles are nonempty")
    }
}

fn check_stacks(spec: &GaussianMixtureSpec, stacks: &[WeightStack]) -> Result<usize> {
    let first = stacks
        .first()
        .ok_or_else(|| Error::domain("bound profile needs at least one weight stack"))?;
    let depth = first.depth();
    for (i, s) in stacks.iter().enumerate() {
        if s.depth() != depth {
            return Err(Error::ShapeMismatch(format!(
                "stack {i} has depth {} but stack 0 has depth {depth}",
                s.depth()
            )));
        }
        if s.input_dim() != spec.d0() {
            return Err(Error::ShapeMismatch(format!(
                "stack {i} takes {}-dimensional input, data has d0 = {}",
                s.input_dim(),
                spec.d0()
            )));
        }
    }
    Ok(depth)
}

/// `2 √(E[r] (log(n/(n-1)) - 1/n) + d0/n)`.
pub fn kl_bound_value(d0: usize, n: usize, mean_rank: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("KL bound needs n >= 2, got {n}")));
    }
    let nf = n as f64;
    let gap = -(-1.0 / nf).ln_1p() - 1.0 / nf;
    Ok(2.0 * (mean_rank * gap + d0 as f64 / nf).sqrt())
}

/// Rank-based KL bound at every layer, with `E[r_l]` the mean numerical
/// rank of `W⊗l` over `stacks`.
pub fn kl_bound_profile(
    spec: &GaussianMixtureSpec,
    stacks: &[WeightStack],
) -> Result<BoundProfile> {
    let depth = check_stacks(spec, stacks)?;
    let m = stacks.len() as f64;
    let statistics: Vec<f64> = (0..=depth)
        .map(|l| stacks.iter().map(|s| s.ranks()[l] as f64).sum::<f64>() / m)
        .collect();
    let values = statistics
        .iter()
        .map(|&r| kl_bound_value(spec.d0(), spec.n(), r))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundProfile {
        kind: BoundKind::Kl,
        argmin: argmin_lowest(&values),
        values,
        statistics,
        trials: stacks.len(),
        seed: None,
    })
}

/// `4√2 σ₀ (√d0 + √n - √(n-1)) / √n`.
pub fn wasserstein_coefficient(spec: &GaussianMixtureSpec) -> f64 {
    let nf = spec.n() as f64;
    let diff = 1.0 / (nf.sqrt() + (nf - 1.0).sqrt());
    4.0 * std::f64::consts::SQRT_2 * spec.sigma0() * ((spec.d0() as f64).sqrt() + diff) / nf.sqrt()
}

/// Wasserstein bound at every layer:
/// `coef · √(E[(1 ∨ ∏_{j>l} ‖W_j‖²_op) ‖W⊗l‖²_F])`.
pub fn wasserstein_bound_profile(
    spec: &GaussianMixtureSpec,
    stacks: &[WeightStack],
) -> Result<BoundProfile> {
    let depth = check_stacks(spec, stacks)?;
    let m = stacks.len() as f64;
    let coef = wasserstein_coefficient(spec);
    let statistics: Vec<f64> = (0..=depth)
        .map(|l| {
            stacks
                .iter()
                .map(|s| s.tail_operator_sq(l).max(1.0) * s.product_frobenius()[l].powi(2))
                .sum::<f64>()
                / m
        })
        .collect();
    let values: Vec<f64> = statistics.iter().map(|v| coef * v.sqrt()).collect();
    Ok(BoundProfile {
        kind: BoundKind::Wasserstein,
        argmin: argmin_lowest(&values),
        values,
        statistics,
        trials: stacks.len(),
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::MatrixR;

    fn spec(n: usize) -> GaussianMixtureSpec {
        GaussianMixtureSpec::new(vec![0.5, 0.0], 1.0, n).unwrap()
    }

    #[test]
    fn kl_closed_form_values() {
        // log(100/99) - 1/100 = 5.0336e-5 computed independently by series
        let gap: f64 = (2..40).map(|k| 1.0 / (k as f64 * 100f64.powi(k))).sum();
        let expect_last = 2.0 * (gap + 0.02).sqrt();
        let expect_first = 2.0 * (2.0 * gap + 0.02).sqrt();
        assert!((kl_bound_value(2, 100, 1.0).unwrap() - expect_last).abs() < 1e-14);
        assert!((kl_bound_value(2, 100, 2.0).unwrap() - expect_first).abs() < 1e-14);
        assert!((expect_last - 0.28320).abs() < 1e-5);
        assert!((expect_first - 0.28355).abs() < 1e-5);
        assert!(kl_bound_value(2, 100_000_000, 2.0).unwrap() < 3e-4);
        assert!(kl_bound_value(2, 1, 2.0).is_err());
    }

    #[test]
    fn identity_stack_wasserstein_first_layer() {
        let s = spec(50);
        let stack = WeightStack::new(vec![MatrixR::identity(2); 3]).unwrap();
        let p = wasserstein_bound_profile(&s, &[stack]).unwrap();
        let coef = wasserstein_coefficient(&s);
        assert!((p.values[0] - coef * 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(p.argmin, 0);
    }

    #[test]
    fn last_layer_tracks_fitted_norm() {
        let s = spec(100);
        let w = [0.4, -0.3];
        let stack = WeightStack::new(vec![MatrixR::row_vector(&w).unwrap()]).unwrap();
        let p = wasserstein_bound_profile(&s, &[stack]).unwrap();
        assert!((p.values[1] - wasserstein_coefficient(&s) * 0.5).abs() < 1e-14);
    }

    #[test]
    fn profile_rejects_mixed_depths() {
        let a = WeightStack::new(vec![MatrixR::identity(2)]).unwrap();
        let b = WeightStack::new(vec![MatrixR::identity(2); 2]).unwrap();
        assert!(kl_bound_profile(&spec(10), &[a, b]).is_err());
        assert!(kl_bound_profile(&spec(10), &[]).is_err());
    }
}
