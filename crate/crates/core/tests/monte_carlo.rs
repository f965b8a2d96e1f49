//! Monte Carlo samplers checked against their closed-form counterparts.
//! All comparisons run on fixed seeds with batch-means standard errors.

use momentgap::estimation::{standardized_gap, summarize, CenterScale};
use momentgap::exact_models::{model_cumulant, Beta, ModelSpec};
use momentgap::simulators::*;
use momentgap::specfun::EULER_MASCHERONI;

/// Batch-means standard error of a statistic over consecutive slices.
fn batch_se(values: &[f64], stat: impl Fn(&[f64]) -> f64) -> f64 {
    let b = (values.len() as f64).sqrt().floor() as usize;
    let size = values.len() / b;
    let stats: Vec<f64> = (0..b).map(|i| stat(&values[i * size..(i + 1) * size])).collect();
    let mean = stats.iter().sum::<f64>() / b as f64;
    let var = stats.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (b as f64 - 1.0);
    (var / b as f64).sqrt()
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / values.len() as f64
}

#[test]
fn wishart_log_determinant_matches_exact_cumulants() {
    // Mean of log chi^2_1 against the closed form, at the scale the sampler
    // is cheapest; then mean and variance for a square case.
    let spec = SimSpec::new(SimModel::WishartLogDet { n: 1, p: 1 }, 10_000_000, 7001).unwrap();
    let batch = spec.run().unwrap();
    let m = mean(&batch.values);
    let se = batch_se(&batch.values, mean);
    let expected = -EULER_MASCHERONI - std::f64::consts::LN_2;
    assert!((m - expected).abs() <= 3.0 * se, "mean {m} vs {expected}, se {se}");

    let model = ModelSpec::LaguerreLogDet { n: 50, p: 50, beta: Beta::One };
    let spec = SimSpec::new(SimModel::WishartLogDet { n: 50, p: 50 }, 100_000, 7002).unwrap();
    let batch = spec.run().unwrap();
    let exact_mean = model_cumulant(&model, 1).unwrap();
    let exact_var = model_cumulant(&model, 2).unwrap();
    let m = mean(&batch.values);
    assert!((m - exact_mean).abs() <= 4.0 * batch_se(&batch.values, mean));
    let v = variance(&batch.values);
    assert!((v - exact_var).abs() <= 4.0 * batch_se(&batch.values, variance), "{v} vs {exact_var}");
}

#[test]
fn gnp_triangle_counts_match_exact_mean_and_variance() {
    let n = 20;
    let p = 0.5;
    let (exact_mean, exact_var) = gnp_triangle_moments_exact(n, p).unwrap();
    assert_eq!(exact_mean, 142.5); // C(20,3) / 8
    let spec = SimSpec::new(
        SimModel::GnpSubgraph { n, edge_probability: p, pattern: PatternGraph::triangle() },
        100_000,
        7003,
    )
    .unwrap();
    let batch = spec.run().unwrap();
    let m = mean(&batch.values);
    let v = variance(&batch.values);
    assert!((m - exact_mean).abs() <= 4.0 * batch_se(&batch.values, mean), "{m} vs {exact_mean}");
    assert!((v - exact_var).abs() <= 4.0 * batch_se(&batch.values, variance), "{v} vs {exact_var}");
}

#[test]
fn small_pattern_means_match_binomial_expectations() {
    // A single edge on four vertices is Binomial(6, p).
    let p = 0.3;
    let spec = SimSpec::new(
        SimModel::GnpSubgraph { n: 4, edge_probability: p, pattern: PatternGraph::single_edge() },
        50_000,
        7004,
    )
    .unwrap();
    let batch = spec.run().unwrap();
    let m = mean(&batch.values);
    assert!((m - 6.0 * p).abs() <= 4.0 * batch_se(&batch.values, mean));

    // A triangle on three vertices is Bernoulli(p^3).
    let spec = SimSpec::new(
        SimModel::GnpSubgraph { n: 3, edge_probability: p, pattern: PatternGraph::triangle() },
        50_000,
        7005,
    )
    .unwrap();
    let batch = spec.run().unwrap();
    for v in &batch.values {
        assert!(*v == 0.0 || *v == 1.0);
    }
    let m = mean(&batch.values);
    assert!((m - p.powi(3)).abs() <= 4.0 * batch_se(&batch.values, mean));
}

#[test]
fn gnm_pattern_count_has_smaller_variance_than_gnp_at_equal_density() {
    // Same expected edge count; the conditioned model loses the edge-count
    // fluctuation, so the path-count variance drops by an order of magnitude.
    let n = 20;
    let m_edges = 95u64;
    let p = m_edges as f64 / 190.0;
    let pattern = PatternGraph::named("path2").unwrap();
    let reps = 40_000;

    let gnm = SimSpec::new(
        SimModel::GnmSubgraph { n, edges: m_edges, pattern: pattern.clone() },
        reps,
        7006,
    )
    .unwrap()
    .run()
    .unwrap();
    let gnp = SimSpec::new(
        SimModel::GnpSubgraph { n, edge_probability: p, pattern },
        reps,
        7007,
    )
    .unwrap()
    .run()
    .unwrap();

    let var_gnm = variance(&gnm.values);
    let var_gnp = variance(&gnp.values);
    let se = 4.0 * (batch_se(&gnm.values, variance) + batch_se(&gnp.values, variance));
    assert!(
        var_gnm + se < var_gnp,
        "gnm variance {var_gnm} not below gnp variance {var_gnp} (allowance {se})"
    );
}

#[test]
fn crossing_samples_match_exhaustive_distributions() {
    for n in 2..=6u64 {
        let dist = enumerate_pair_partitions_crossings(n).unwrap();
        let (exact_mean, exact_var) = distribution_mean_variance(&dist);
        let spec = SimSpec::new(SimModel::Crossings { n }, 50_000, 7100 + n).unwrap();
        let batch = spec.run().unwrap();
        let m = mean(&batch.values);
        let v = variance(&batch.values);
        assert!(
            (m - exact_mean).abs() <= 4.0 * batch_se(&batch.values, mean),
            "n={n}: mean {m} vs {exact_mean}"
        );
        assert!(
            (v - exact_var).abs() <= 4.0 * batch_se(&batch.values, variance),
            "n={n}: var {v} vs {exact_var}"
        );
    }
}

#[test]
fn crossing_variance_grows_like_n_cubed() {
    let mut scaled = Vec::new();
    for n in [16u64, 32, 64] {
        let spec = SimSpec::new(SimModel::Crossings { n }, 20_000, 7200 + n).unwrap();
        let batch = spec.run().unwrap();
        scaled.push(variance(&batch.values) / (n as f64).powi(3));
    }
    let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = scaled.iter().cloned().fold(0.0f64, f64::max);
    assert!(hi / lo < 1.5, "variance / n^3 drifts: {scaled:?}");
}

#[test]
fn ustat_samples_match_exact_variance() {
    let n = 50;
    let spec = SimSpec::new(SimModel::UStatistic { n, kernel: UKernel::AddMul }, 100_000, 7008)
        .unwrap();
    let batch = spec.run().unwrap();
    let exact = ustat_variance(n, 1.0, 3.0).unwrap();
    let v = variance(&batch.values);
    assert!((v - exact).abs() <= 4.0 * batch_se(&batch.values, variance), "{v} vs {exact}");
}

#[test]
fn standardized_gaps_agree_with_exact_standardization() {
    // Wishart batch standardized by the exact mean and standard deviation:
    // the empirical fourth-moment gap must sit within noise of the exact one.
    let model = ModelSpec::LaguerreLogDet { n: 50, p: 50, beta: Beta::One };
    let sim = SimModel::WishartLogDet { n: 50, p: 50 };
    let (c, s) = sim.exact_center_scale().unwrap().unwrap();
    assert!((c - model_cumulant(&model, 1).unwrap()).abs() < 1e-12);

    let batch = SimSpec::new(sim, 100_000, 7009).unwrap().run().unwrap();
    let summary = summarize(&batch, 6).unwrap();
    let (gap, se) = standardized_gap(&summary, 4, CenterScale::Exact { mean: c, sd: s }).unwrap();
    let exact_gap = (momentgap::exact_models::standardized_moment_exact(&model, 4).unwrap()
        - momentgap::combinatorics::gaussian_moment(4))
    .abs();
    assert!((gap - exact_gap).abs() <= 4.0 * se, "gap {gap}, exact {exact_gap}, se {se}");
}

#[test]
fn symmetric_sum_odd_moments_vanish() {
    // Rademacher sums are exactly symmetric, so every odd standardized
    // moment gap sits at the noise level.
    let batch = SimSpec::new(
        SimModel::IndependentSum { sigmas: vec![1.0; 64], dist: SumDist::Rademacher },
        100_000,
        7011,
    )
    .unwrap()
    .run()
    .unwrap();
    let summary = summarize(&batch, 6).unwrap();
    for k in [3usize, 5] {
        let (gap, se) =
            standardized_gap(&summary, k, CenterScale::Exact { mean: 0.0, sd: 1.0 }).unwrap();
        assert!(gap <= 4.0 * se, "k={k}: gap {gap}, se {se}");
    }
}

#[test]
fn independent_sum_third_moment_matches_rate() {
    let sigmas = vec![1.0; 100];
    let spec = SimSpec::new(
        SimModel::IndependentSum { sigmas, dist: SumDist::CenteredExponential },
        1_000_000,
        7010,
    )
    .unwrap();
    let batch = spec.run().unwrap();
    let third = |vals: &[f64]| vals.iter().map(|v| v.powi(3)).sum::<f64>() / vals.len() as f64;
    let m3 = third(&batch.values);
    let se = batch_se(&batch.values, third);
    assert!((m3 - 0.2).abs() <= 4.0 * se, "third moment {m3}, se {se}");
}
