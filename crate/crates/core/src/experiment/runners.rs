use super::{ExperimentConfig, ExperimentKind, ExperimentReport, ReportRow};
use crate::bounds::{finite_param_mi_ub, FiniteParamSpec};
use crate::casestudy::{
    empirical_gen_error, funnel_layer, kl_bound_profile, kl_bound_value, sample_rotation_stacks,
    wasserstein_bound_profile, GaussianMixtureSpec, MeanClassifier, RotationStackConfig,
};
use crate::network::{NetworkSpec, RegularizationDescriptor};
use crate::numerics::{MatrixR, SeededRng, WeightStack, DEFAULT_RANK_TOL};
use crate::sdpi::{network_eta_product, site_coefficients};
use crate::{Error, Result};

fn expect_kind(cfg: &ExperimentConfig, allowed: &[ExperimentKind]) -> Result<ExperimentKind> {
    let kind = cfg.validate()?;
    if !allowed.contains(&kind) {
        return Err(Error::config(
            "kind",
            format!("runner does not handle `{}`", kind.as_str()),
        ));
    }
    Ok(kind)
}

/// Validates `cfg` and dispatches to the runner for its kind.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    match cfg.validate()? {
        ExperimentKind::Table1 => run_table1(cfg),
        ExperimentKind::Genbound => run_genbound(cfg),
        ExperimentKind::AddLayerSweep | ExperimentKind::SplitLayerSweep => run_depth_sweep(cfg),
        ExperimentKind::BoundProfile => run_bound_profile(cfg),
        ExperimentKind::SdpiTable => run_sdpi_table(cfg),
    }
}

fn mixture(cfg: &ExperimentConfig, n: usize) -> Result<GaussianMixtureSpec> {
    GaussianMixtureSpec::new(cfg.mu0(), cfg.sigma0(), n)
}

fn stack_config(cfg: &ExperimentConfig, l_prime: usize) -> Result<RotationStackConfig> {
    RotationStackConfig::with_mode(
        cfg.depth(),
        l_prime,
        cfg.funnel_fraction(),
        cfg.scale_mode(),
    )
}

/// Funnel layer for each funnel index in `cfg.l_primes`. Every row reuses
/// the same seed, so rows differ only through the funnel index.
pub fn run_table1(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(cfg, &[ExperimentKind::Table1])?;
    let depth = cfg.depth();
    let spec = mixture(cfg, cfg.n())?;
    let rng = SeededRng::new(cfg.seed()?, 0);

    let mut columns: Vec<String> = [
        "l_prime",
        "l_star",
        "weighted_l_star",
        "tail_violation_rate",
        "models",
    ]
    .map(String::from)
    .to_vec();
    columns.extend((0..=depth).map(|l| format!("mean_l{l}")));
    let mut report = ExperimentReport::new(columns);

    for l_prime in cfg.l_primes() {
        let res = funnel_layer(
            &spec,
            &stack_config(cfg, l_prime)?,
            cfg.datasets(),
            cfg.stacks_per_dataset(),
            &rng,
        )?;
        let mut row = ReportRow::new()
            .with("l_prime", l_prime)
            .with("l_star", res.l_star)
            .with("weighted_l_star", res.weighted_l_star)
            .with("tail_violation_rate", res.tail_violation_rate)
            .with("models", res.models);
        for (l, m) in res.sample_means.iter().enumerate() {
            row.push(format!("mean_l{l}"), *m);
        }
        report.push(row)?;
    }
    Ok(report)
}

/// `(η product, I(X;W|Y) upper bound, √(η·mi_ub + log K))` for a uniformly
/// regularized network with weights in `[B]`.
pub fn sweep_bound(
    dims: &[usize],
    label_count: usize,
    b: usize,
    reg: RegularizationDescriptor,
) -> Result<(f64, f64, f64)> {
    let spec = NetworkSpec::uniform(dims.to_vec(), label_count, reg)?;
    let eta = network_eta_product(&spec)?;
    let mi = finite_param_mi_ub(&FiniteParamSpec::new(dims.to_vec(), b)?);
    Ok((eta, mi, (eta * mi + (label_count as f64).ln()).sqrt()))
}

fn dims_text(dims: &[usize]) -> String {
    dims.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("-")
}

/// Add-layer sweep inserts a layer of width `d*` after the input; split
/// sweep divides `dims[1]` into `(d, dims[1] - d)`. Each row is compared
/// against the unmodified `dims`.
pub fn run_depth_sweep(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let kind = expect_kind(
        cfg,
        &[
            ExperimentKind::AddLayerSweep,
            ExperimentKind::SplitLayerSweep,
        ],
    )?;
    let dims = cfg.dims();
    let (k, b, reg) = (cfg.label_count(), cfg.b(), cfg.regularization());
    let (base_eta, base_mi, base_bound) = sweep_bound(&dims, k, b, reg)?;

    let (param, variants): (&str, Vec<(usize, Vec<usize>)>) = match kind {
        ExperimentKind::AddLayerSweep => {
            let [lo, hi] = cfg.d_star_range();
            let v = (lo..=hi)
                .map(|d| {
                    let mut nd = vec![dims[0], d];
                    nd.extend_from_slice(&dims[1..]);
                    (d, nd)
                })
                .collect();
            ("d_star", v)
        }
        _ => {
            let total = dims[1];
            let v = (1..total)
                .map(|d| {
                    let mut nd = vec![dims[0], d, total - d];
                    nd.extend_from_slice(&dims[2..]);
                    (d, nd)
                })
                .collect();
            ("d", v)
        }
    };

    let mut report = ExperimentReport::new([
        param,
        "dims",
        "eta_product",
        "mi_ub",
        "bound",
        "baseline_eta_product",
        "baseline_mi_ub",
        "baseline_bound",
        "below_baseline",
    ]);
    for (d, nd) in variants {
        let (eta, mi, bound) = sweep_bound(&nd, k, b, reg)?;
        report.push(
            ReportRow::new()
                .with(param, d)
                .with("dims", dims_text(&nd).as_str())
                .with("eta_product", eta)
                .with("mi_ub", mi)
                .with("bound", bound)
                .with("baseline_eta_product", base_eta)
                .with("baseline_mi_ub", base_mi)
                .with("baseline_bound", base_bound)
                .with("below_baseline", bound < base_bound),
        )?;
    }
    Ok(report)
}

/// Per-site contraction coefficients and their running product.
pub fn run_sdpi_table(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(cfg, &[ExperimentKind::SdpiTable])?;
    let dims = cfg.dims();
    let spec = NetworkSpec::uniform(dims.clone(), cfg.label_count(), cfg.regularization())?;
    let mut report = ExperimentReport::new([
        "site",
        "kind",
        "fan_in",
        "fan_out",
        "eta",
        "tightness",
        "cumulative_eta",
    ]);
    let mut cumulative = 1.0;
    for (i, (c, site)) in site_coefficients(&spec)?
        .iter()
        .zip(spec.sites())
        .enumerate()
    {
        cumulative *= c.value;
        report.push(
            ReportRow::new()
                .with("site", i + 1)
                .with("kind", site.name())
                .with("fan_in", dims[i])
                .with("fan_out", dims[i + 1])
                .with("eta", c.value)
                .with("tightness", c.tightness.as_str())
                .with("cumulative_eta", cumulative),
        )?;
    }
    Ok(report)
}

/// KL and Wasserstein bound profiles over rotation stacks, one row per
/// `(l_prime, layer)`.
pub fn run_bound_profile(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(cfg, &[ExperimentKind::BoundProfile])?;
    let spec = mixture(cfg, cfg.n())?;
    let rng = SeededRng::new(cfg.seed()?, 0);
    let mut report = ExperimentReport::new([
        "l_prime",
        "layer",
        "mean_rank",
        "kl_bound",
        "weighted_frobenius_sq",
        "wasserstein_bound",
        "kl_argmin",
        "wasserstein_argmin",
    ]);
    for l_prime in cfg.l_primes() {
        let stacks = sample_rotation_stacks(
            &spec,
            &stack_config(cfg, l_prime)?,
            cfg.datasets(),
            cfg.stacks_per_dataset(),
            &rng,
        )?;
        let kl = kl_bound_profile(&spec, &stacks)?;
        let w = wasserstein_bound_profile(&spec, &stacks)?;
        for l in 0..kl.values.len() {
            report.push(
                ReportRow::new()
                    .with("l_prime", l_prime)
                    .with("layer", l)
                    .with("mean_rank", kl.statistics[l])
                    .with("kl_bound", kl.values[l])
                    .with("weighted_frobenius_sq", w.statistics[l])
                    .with("wasserstein_bound", w.values[l])
                    .with("kl_argmin", kl.argmin)
                    .with("wasserstein_argmin", w.argmin),
            )?;
        }
    }
    Ok(report)
}

/// Monte-Carlo generalization error of the mean classifier against the
/// last-layer KL bound and the smallest Wasserstein bound of the one-layer
/// learner `w ↦ wᵀ`, for each `n` in `cfg.n_values`.
///
/// The dominance columns allow three standard errors of Monte-Carlo slack.
pub fn run_genbound(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(cfg, &[ExperimentKind::Genbound])?;
    let base = SeededRng::new(cfg.seed()?, 0);
    let mut report = ExperimentReport::new([
        "n",
        "datasets",
        "gen_error",
        "std_error",
        "kl_bound",
        "wasserstein_bound",
        "wasserstein_argmin",
        "kl_dominates",
        "wasserstein_dominates",
    ]);
    for n in cfg.n_values() {
        let spec = mixture(cfg, n)?;
        let est = empirical_gen_error(
            &spec,
            &MeanClassifier,
            cfg.datasets(),
            &base.fork(n as u64),
            cfg.risk_mode(),
        )?;
        let stacks = est
            .weights
            .iter()
            .map(|w| WeightStack::new(vec![MatrixR::row_vector(w)?]))
            .collect::<Result<Vec<_>>>()?;
        let mean_rank = stacks
            .iter()
            .map(|s| s.product(1).numerical_rank(DEFAULT_RANK_TOL) as f64)
            .sum::<f64>()
            / stacks.len() as f64;
        let kl = kl_bound_value(spec.d0(), n, mean_rank)?;
        let w = wasserstein_bound_profile(&spec, &stacks)?;
        let slack = est.estimate.abs() - 3.0 * est.std_error;
        report.push(
            ReportRow::new()
                .with("n", n)
                .with("datasets", cfg.datasets())
                .with("gen_error", est.estimate)
                .with("std_error", est.std_error)
                .with("kl_bound", kl)
                .with("wasserstein_bound", w.min_value())
                .with("wasserstein_argmin", w.argmin)
                .with("kl_dominates", slack <= kl)
                .with("wasserstein_dominates", slack <= w.min_value()),
        )?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_bound_hand_values() {
        let ln2 = std::f64::consts::LN_2;
        let reg = RegularizationDescriptor::Dropout { delta: 0.5 };
        let (eta, mi, bound) = sweep_bound(&[10, 1, 20, 2], 2, 2, reg).unwrap();
        let eta_hand = (1.0 - 0.5f64.powi(10)) * 0.5 * (1.0 - 0.5f64.powi(20));
        assert!((eta - eta_hand).abs() < 1e-15);
        assert!((mi - 70.0 * ln2).abs() < 1e-12);
        assert!((bound - (eta_hand * 70.0 * ln2 + ln2).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sdpi_table_rows() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::SdpiTable);
        cfg.dims = Some(vec![3, 2, 1]);
        let r = run_sdpi_table(&cfg).unwrap();
        assert_eq!(r.len(), 2);
        let eta = r.column_f64("eta");
        assert!((eta[0] - 0.875).abs() < 1e-15);
        assert!((eta[1] - 0.75).abs() < 1e-15);
        assert!((r.column_f64("cumulative_eta")[1] - 0.65625).abs() < 1e-15);
    }

    #[test]
    fn split_sweep_covers_interior() {
        let cfg = ExperimentConfig::new(ExperimentKind::SplitLayerSweep);
        let r = run_depth_sweep(&cfg).unwrap();
        assert_eq!(r.len(), 29);
        assert_eq!(
            r.column_f64("d"),
            (1..30).map(f64::from).collect::<Vec<_>>()
        );
    }

    #[test]
    fn wrong_kind_rejected() {
        let cfg = ExperimentConfig::new(ExperimentKind::SdpiTable);
        assert_eq!(run_depth_sweep(&cfg).unwrap_err().kind(), "config");
    }
}
