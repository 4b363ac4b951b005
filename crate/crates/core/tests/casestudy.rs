mod common;

use infobound::casestudy::{
    build_rotation_stack, empirical_gen_error, fit_mean_classifier, funnel_layer, kl_bound_profile,
    kl_bound_value, population_risk, population_risk_monte_carlo, sample_dataset,
    wasserstein_bound_profile, wasserstein_coefficient, FixedWeights, GaussianMixtureSpec,
    MeanClassifier, RiskMode, RotationStackConfig, ScaleMode,
};
use infobound::numerics::GaussHermite;
use infobound::{SeededRng, WeightStack};

fn mixture(n: usize) -> GaussianMixtureSpec {
    GaussianMixtureSpec::new(vec![0.5, 0.0], 1.0, n).unwrap()
}

/// Layer scales read off the matrix entries: `C·(c, s)` rows for rotations,
/// `(0, C)` for the final row.
fn scales_from_entries(stack: &WeightStack) -> Vec<f64> {
    let l = stack.layers();
    let mut out: Vec<f64> = l[..l.len() - 1]
        .iter()
        .map(|w| w.get(0, 0).hypot(w.get(0, 1)))
        .collect();
    out.push(l[l.len() - 1].get(0, 1));
    out
}

#[test]
fn sample_mean_concentrates() {
    let n = 100_000;
    let data = sample_dataset(&mixture(n), &mut SeededRng::new(8, 0));
    let w = fit_mean_classifier(&data);
    let tol = 4.0 / (n as f64).sqrt();
    assert!((w[0] - 0.5).abs() < tol && w[1].abs() < tol, "{w:?}");
    let pos = data.labels().iter().filter(|&&y| y == 1).count() as f64 / n as f64;
    assert!((pos - 0.5).abs() < 4.0 * 0.5 / (n as f64).sqrt());
}

#[test]
fn vanishing_noise_gives_class_means() {
    let spec = GaussianMixtureSpec::new(vec![0.5, -1.5], 1e-200, 20).unwrap();
    let data = sample_dataset(&spec, &mut SeededRng::new(1, 0));
    for i in 0..data.len() {
        let (x, y) = data.sample(i);
        assert!((x[0] - 0.5 * y).abs() < 1e-150 && (x[1] + 1.5 * y).abs() < 1e-150);
    }
}

#[test]
fn sampling_is_deterministic() {
    let a = sample_dataset(&mixture(50), &mut SeededRng::new(3, 4));
    let b = sample_dataset(&mixture(50), &mut SeededRng::new(3, 4));
    assert_eq!(a.features().as_slice(), b.features().as_slice());
    assert_eq!(a.labels(), b.labels());
}

#[test]
fn fitted_mean_matches_recomputation() {
    let data = sample_dataset(&mixture(100), &mut SeededRng::new(42, 0));
    let w = fit_mean_classifier(&data);
    // second pass, same summation order
    let mut sum = [0.0f64; 2];
    for (i, &y) in data.labels().iter().enumerate() {
        for (s, v) in sum.iter_mut().zip(data.features().row(i)) {
            *s += f64::from(y) * v;
        }
    }
    assert_eq!(w, vec![sum[0] / 100.0, sum[1] / 100.0]);
    // streaming mean agrees to rounding
    let mut m = [0.0f64; 2];
    for (i, &y) in data.labels().iter().enumerate() {
        for (mj, v) in m.iter_mut().zip(data.features().row(i)) {
            *mj += (f64::from(y) * v - *mj) / (i + 1) as f64;
        }
    }
    assert!((m[0] - w[0]).abs() < 1e-14 && (m[1] - w[1]).abs() < 1e-14);
}

#[test]
fn rotation_stack_norm_identities() {
    let spec = mixture(100);
    for seed in 0..100 {
        let rng = SeededRng::new(seed, 0);
        let target = fit_mean_classifier(&sample_dataset(&spec, &mut rng.fork(0)));
        let norm = target[0].hypot(target[1]);
        let l_prime = 1 + (seed as usize % 9);
        let cfg = RotationStackConfig::new(10, l_prime, 0.2).unwrap();
        let stack = build_rotation_stack(&cfg, &target, &mut rng.fork(1)).unwrap();

        let c = scales_from_entries(&stack);
        let mut prefix = 1.0;
        for l in 1..=10 {
            prefix *= c[l - 1];
            let want = if l < 10 { 2f64.sqrt() * prefix } else { prefix };
            let got = stack.product_frobenius()[l];
            assert!((got - want).abs() < 1e-10 * want, "seed {seed} l {l}");
        }
        let head: f64 = c[..l_prime].iter().product();
        assert!((head - 0.2 * norm).abs() < 1e-8 * norm);
        assert!((prefix - norm).abs() < 1e-8 * norm);

        let p = stack.product(10);
        let resid = (p.get(0, 0) - target[0]).hypot(p.get(0, 1) - target[1]);
        assert!(resid < 1e-8 * norm, "seed {seed}: residual {resid}");
        assert_eq!(stack.ranks().last(), Some(&1));
    }
}

#[test]
fn equal_scales_put_funnel_at_output() {
    let spec = mixture(100);
    let cfg = RotationStackConfig::with_mode(6, 2, 1.0, ScaleMode::Equal).unwrap();
    let res = funnel_layer(&spec, &cfg, 10, 3, &SeededRng::new(7, 0)).unwrap();
    assert_eq!(res.l_star, 6);
    // all targets have norm < 1 here, so the products shrink geometrically
    for l in 1..6 {
        assert!(res.sample_means[l] < res.sample_means[l - 1]);
    }
}

#[test]
fn funnel_is_independent_of_thread_count() {
    let spec = mixture(100);
    let cfg = RotationStackConfig::new(10, 5, 0.2).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| funnel_layer(&spec, &cfg, 12, 7, &SeededRng::new(42, 0)).unwrap())
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(a, b);
    assert_eq!(a.l_star, 5);
}

#[test]
fn kl_profile_on_rotation_stacks_uses_structural_ranks() {
    let spec = mixture(100);
    let cfg = RotationStackConfig::new(10, 3, 0.2).unwrap();
    let stacks: Vec<WeightStack> = (0..20)
        .map(|k| {
            let rng = SeededRng::new(k, 0);
            let t = fit_mean_classifier(&sample_dataset(&spec, &mut rng.fork(0)));
            build_rotation_stack(&cfg, &t, &mut rng.fork(1)).unwrap()
        })
        .collect();
    let p = kl_bound_profile(&spec, &stacks).unwrap();
    let mut want = vec![2.0; 10];
    want.push(1.0);
    assert_eq!(p.statistics, want);
    assert_eq!(p.values[10], kl_bound_value(2, 100, 1.0).unwrap());
    assert!(p.values.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(p.argmin, 10);
}

#[test]
fn wasserstein_profile_scales_with_coefficient() {
    let cfg = RotationStackConfig::new(4, 2, 0.2).unwrap();
    let stack = build_rotation_stack(&cfg, &[0.3, 0.4], &mut SeededRng::new(0, 0)).unwrap();
    let stacks = [stack];
    let a = wasserstein_bound_profile(&mixture(50), &stacks).unwrap();
    let b = wasserstein_bound_profile(&mixture(5000), &stacks).unwrap();
    let ratio =
        wasserstein_coefficient(&mixture(50)) / wasserstein_coefficient(&mixture(5000));
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!(common::rel_diff(x / y, ratio) < 1e-13);
    }
    assert_eq!(a.argmin, b.argmin);
}

#[test]
fn quadrature_agrees_with_independent_monte_carlo() {
    let spec = mixture(100);
    let rule = GaussHermite::new(64);
    for (k, w) in [[0.5, 0.0], [0.31, -0.2], [1.1, 0.4]].iter().enumerate() {
        let quad = population_risk(&spec, w, &rule);
        // independent MC with its own standard error
        let m = 1_000_000;
        let big = sample_dataset(
            &spec.with_n(m).unwrap(),
            &mut SeededRng::new(100 + k as u64, 0),
        );
        let losses: Vec<f64> = (0..m)
            .map(|i| {
                let (x, y) = big.sample(i);
                (y - (w[0] * x[0] + w[1] * x[1]).tanh()).powi(2)
            })
            .collect();
        let mean = losses.iter().sum::<f64>() / m as f64;
        let var = losses.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
        let se = (var / m as f64).sqrt();
        assert!(
            (quad - mean).abs() < 3.0 * se,
            "w {w:?}: {quad} vs {mean} ± {se}"
        );

        let lib_mc = population_risk_monte_carlo(&spec, w, m, &mut SeededRng::new(7, k as u64));
        assert!((quad - lib_mc).abs() < 3.0 * se * 2f64.sqrt());
    }
}

#[test]
fn fitted_weights_approach_class_mean() {
    let n = 2000;
    let spec = mixture(n);
    let radius = 4.0 * (2.0 / n as f64).sqrt();
    let within = (0..500)
        .filter(|&s| {
            let w = fit_mean_classifier(&sample_dataset(&spec, &mut SeededRng::new(s, 0)));
            (w[0] - 0.5).hypot(w[1]) <= radius
        })
        .count();
    assert!(within >= 495, "{within}/500");
}

#[test]
fn data_independent_model_has_no_gap_within_noise() {
    let est = empirical_gen_error(
        &mixture(50),
        &FixedWeights(vec![0.7, -0.3]),
        400,
        &SeededRng::new(12, 0),
        RiskMode::Quadrature,
    )
    .unwrap();
    assert!(est.estimate.abs() < 3.0 * est.std_error, "{est:?}");
}

#[test]
fn mean_classifier_gap_is_positive_and_shrinks() {
    let gen = |n| {
        empirical_gen_error(
            &mixture(n),
            &MeanClassifier,
            300,
            &SeededRng::new(5, 0),
            RiskMode::Quadrature,
        )
        .unwrap()
    };
    let (small, large) = (gen(20), gen(500));
    assert!(small.estimate > 0.0);
    assert!(large.estimate.abs() < small.estimate);
}
