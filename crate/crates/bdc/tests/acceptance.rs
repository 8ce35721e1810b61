//! Acceptance suite: every release-gating criterion runs here and
//! prints one pass/fail line (run with `--nocapture` to see them all).

mod common;

use bdc::core::{
    induce_partition, is_refinement, validate_distance_matrix, MedoidSet, MultiViewData, Partition,
};
use bdc::hyper::select_hyperparameters;
use bdc::kmedoids::{map_equivalence_check, pam};
use bdc::likelihood::{
    log_marginal_gamma_block, loglik, loglik_linear, loglik_quadratic, LikelihoodConfig, Mode,
};
use bdc::numerics::{integrate, log_beta, log_sum_exp, QuadratureSpec};
use bdc::posterior::{adjusted_rand, point_estimate};
use bdc::priors::{
    log_medoid_prior, log_medoid_prior_k, log_penalty_c, log_py_eppf, partition_distance,
    AlphaPriorConfig, MedoidPriorConfig, PYConfig,
};
use bdc::samplers::{
    derive_seed, run_bdm, run_gibbs_indicators, run_joint, run_nested, run_py_dependent,
    sample_alpha_conditional, ChainConfig, InitStrategy, LikelihoodSpec, PyDependentOptions,
};
use bdc::simulate::{simulate_two_layer, SimConfig};
use common::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::time::Instant;

fn report(name: &str, pass: bool, detail: &str) {
    println!("acceptance {name}: {} — {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{name}: {detail}");
}

/// Criterion 1: closed-form marginal likelihoods agree with adaptive
/// quadrature to 1e-6 (log scale) on 100 random blocks plus whole-matrix
/// evaluations in both modes.
#[test]
fn c1_likelihood_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9001);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let n_pairs = rng.random_range(1..=6);
        let xs: Vec<f64> = (0..n_pairs).map(|_| rng.random_range(0.05..4.0)).collect();
        let shape = if trial % 2 == 0 {
            rng.random_range(0.2..0.95) // cohesion-style block
        } else {
            rng.random_range(1.1..4.0) // repulsion-style block
        };
        let hyper_shape = rng.random_range(0.5..4.0);
        let hyper_rate = rng.random_range(0.5..4.0);
        let sum_log: f64 = xs.iter().map(|x| x.ln()).sum();
        let sum: f64 = xs.iter().sum();
        let closed = log_marginal_gamma_block(xs.len(), sum_log, sum, shape, hyper_shape, hyper_rate);
        let oracle = quadrature_block_marginal(&xs, shape, hyper_shape, hyper_rate);
        worst = worst.max((closed - oracle).abs());
    }
    // whole-likelihood comparisons, quadratic and linear
    for _ in 0..10 {
        let n = rng.random_range(4..7);
        let d = random_matrix(n, 0.1, 4.0, &mut rng);
        let k = rng.random_range(1..=3.min(n));
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        let medoids = MedoidSet::new(idx[..k].to_vec(), n).unwrap();
        let t = induce_partition(&d, &medoids);
        let cfgq =
            LikelihoodConfig::new(0.6, 2.2, 1.1, 1.4, 1.8, 1.2, 1.5, Mode::Quadratic, true).unwrap();
        let closed = loglik_quadratic(&d, &t, &cfgq).unwrap();
        let mut oracle = 0.0;
        for a in 0..t.k() {
            let block: Vec<f64> = t
                .cluster(a)
                .iter()
                .enumerate()
                .flat_map(|(pi, &i)| {
                    t.cluster(a)[pi + 1..].iter().map(move |&j| (i, j)).collect::<Vec<_>>()
                })
                .map(|(i, j)| d.get_clamped(i, j))
                .collect();
            if !block.is_empty() {
                oracle += quadrature_block_marginal(&block, cfgq.delta1, cfgq.mu, cfgq.beta);
            }
            for b in (a + 1)..t.k() {
                let cross: Vec<f64> = t
                    .cluster(a)
                    .iter()
                    .flat_map(|&i| t.cluster(b).iter().map(move |&j| (i, j)))
                    .map(|(i, j)| d.get_clamped(i, j))
                    .collect();
                if !cross.is_empty() {
                    oracle +=
                        quadrature_block_marginal(&cross, cfgq.delta2, cfgq.zeta, cfgq.gamma_rate);
                }
            }
        }
        worst = worst.max((closed - oracle).abs());
        // linear cohesion blocks
        let cfgl = cfgq.with_mode(Mode::Linear).with_repulsion(false);
        let closed = loglik_linear(&d, &medoids, &t, &cfgl).unwrap();
        let mut oracle = 0.0;
        for (pos, &m) in medoids.indices().iter().enumerate() {
            let block: Vec<f64> = t
                .cluster(pos)
                .iter()
                .filter(|&&j| j != m)
                .map(|&j| d.get_clamped(m, j))
                .collect();
            if !block.is_empty() {
                oracle += quadrature_block_marginal(&block, cfgl.delta1, cfgl.mu, cfgl.beta);
            }
        }
        worst = worst.max((closed - oracle).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "C1 likelihood-oracle equivalence",
        worst <= 1e-6 && elapsed < 60.0,
        &format!("max |closed - quadrature| = {worst:.2e}, {elapsed:.1}s"),
    );
}

/// Criterion 2: the medoid prior sums to one over every medoid set at
/// N = 12 and the PY EPPF over every partition at N = 8, to 1e-10.
#[test]
fn c2_prior_normalization() {
    let n = 12;
    let mut worst: f64 = 0.0;
    for &p in &[0.25, 0.5, 0.8] {
        let cfg = MedoidPriorConfig::new(p, n).unwrap();
        let mut total = 0.0;
        for mask in 1u64..(1 << n) {
            total += log_medoid_prior_k(mask.count_ones() as usize, &cfg).exp();
        }
        worst = worst.max((total - 1.0).abs());
    }
    let partitions = set_partitions(8);
    for &(m, disc) in &[(1.0, 0.0), (1.0, 0.3), (0.5, 0.7)] {
        let cfg = PYConfig::new(m, disc).unwrap();
        let total: f64 = partitions
            .iter()
            .map(|z| log_py_eppf(&Partition::from_labels(z).sizes(), &cfg).exp())
            .sum();
        worst = worst.max((total - 1.0).abs());
    }
    report(
        "C2 prior normalization",
        worst <= 1e-10,
        &format!("max |sum - 1| = {worst:.2e} over 2^12-1 medoid sets and {} partitions", partitions.len()),
    );
}

/// Criterion 3: empirical posteriors match exhaustive enumeration — the
/// two single-layer samplers at N = 7 (TV <= 0.05) and the joint model
/// at N = 6 (TV <= 0.08).
#[test]
fn c3_exact_posterior_recovery() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9003);
    let cfg = LikelihoodConfig::new(0.5, 2.2, 1.2, 1.5, 1.4, 1.1, 1.3, Mode::Linear, true).unwrap();
    let lik = LikelihoodSpec::Config(cfg);
    // single layer at N = 7
    let n = 7;
    let d = random_matrix(n, 0.2, 3.0, &mut rng);
    let prior = MedoidPriorConfig::new(0.4, n).unwrap();
    let exact = exact_medoid_posterior(n, |m| {
        let t = induce_partition(&d, m);
        loglik_linear(&d, m, &t, &cfg).unwrap() + log_medoid_prior(m, &prior)
    });
    let chain = ChainConfig::new(500_000, 25_000, 1, 31, InitStrategy::RandomK(2));
    let bdm = run_bdm(&d, &lik, &prior, &chain);
    let tv_bdm = tv_distance(&empirical_medoid_distribution(bdm.medoid_draws(0)), &exact);
    let chain_g = ChainConfig::new(500_000, 25_000, 1, 32, InitStrategy::RandomK(4));
    let gibbs = run_gibbs_indicators(&d, &lik, &prior, &chain_g);
    let tv_gibbs = tv_distance(&empirical_medoid_distribution(gibbs.medoid_draws(0)), &exact);

    // joint model at N = 6
    let n = 6;
    let mv = MultiViewData::new(
        random_matrix(n, 0.2, 3.0, &mut rng),
        random_matrix(n, 0.2, 3.0, &mut rng),
    )
    .unwrap();
    let priorj = MedoidPriorConfig::new(0.4, n).unwrap();
    let alpha_prior = AlphaPriorConfig::new(1.0, 1.0).unwrap();
    let mut keys = Vec::new();
    let mut logs = Vec::new();
    let mut penalty_memo: HashMap<u64, f64> = HashMap::new();
    for m1 in 1u64..(1 << n) {
        let g1 = MedoidSet::new((0..n).filter(|&j| m1 >> j & 1 == 1).collect(), n).unwrap();
        let t1 = induce_partition(&mv.d1, &g1);
        let lp1 = loglik_linear(&mv.d1, &g1, &t1, &cfg).unwrap() + log_medoid_prior(&g1, &priorj);
        for m2 in 1u64..(1 << n) {
            let g2 = MedoidSet::new((0..n).filter(|&j| m2 >> j & 1 == 1).collect(), n).unwrap();
            let t2 = induce_partition(&mv.d2, &g2);
            let lp2 =
                loglik_linear(&mv.d2, &g2, &t2, &cfg).unwrap() + log_medoid_prior(&g2, &priorj);
            let dist = partition_distance(&t1, &t2);
            let lc = *penalty_memo
                .entry(dist.to_bits())
                .or_insert_with(|| log_penalty_c(dist, &alpha_prior).unwrap());
            keys.push((m1, m2));
            logs.push(lp1 + lp2 + lc);
        }
    }
    let norm = log_sum_exp(&logs);
    let exact_joint: HashMap<(u64, u64), f64> =
        keys.into_iter().zip(logs.iter().map(|lp| (lp - norm).exp())).collect();
    let chain_j = ChainConfig::new(1_000_000, 50_000, 1, 33, InitStrategy::RandomK(2));
    let joint = run_joint(&mv, &lik, &lik, &priorj, &priorj, &alpha_prior, &chain_j);
    let mut emp: HashMap<(u64, u64), f64> = HashMap::new();
    for i in 0..joint.len() {
        let key = (
            medoid_mask(&joint.medoid_draws(0)[i]),
            medoid_mask(&joint.medoid_draws(1)[i]),
        );
        *emp.entry(key).or_insert(0.0) += 1.0;
    }
    emp.values_mut().for_each(|v| *v /= joint.len() as f64);
    let tv_joint = tv_distance(&emp, &exact_joint);

    let elapsed = start.elapsed().as_secs_f64();
    report(
        "C3 exact-posterior recovery",
        tv_bdm <= 0.05 && tv_gibbs <= 0.05 && tv_joint <= 0.08 && elapsed < 600.0,
        &format!("TV bdm {tv_bdm:.4}, gibbs {tv_gibbs:.4}, joint {tv_joint:.4}, {elapsed:.0}s"),
    );
}

fn fit_tessellation_ari(sim_seed: u64, sigma: f64) -> (f64, f64) {
    let sim = simulate_two_layer(&SimConfig {
        sigma_s: sigma,
        alpha_s: 0.5,
        seed: sim_seed,
        ..SimConfig::default()
    })
    .unwrap();
    let sel = select_hyperparameters(&sim.d1, (2, 30)).unwrap();
    let cfg = sel.cfg.with_mode(Mode::Linear).with_repulsion(true);
    let init = pam(&sim.d1, sel.k_elbow).unwrap().medoids;
    let prior = MedoidPriorConfig::new(0.1, sim.d1.n()).unwrap();
    let chain = ChainConfig::new(10_000, 2_500, 1, derive_seed(sim_seed, 1), InitStrategy::Explicit(init));
    let trace = run_bdm(&sim.d1, &LikelihoodSpec::Config(cfg), &prior, &chain);
    let est = point_estimate(trace.labels(0)).unwrap();
    let ari_tess = adjusted_rand(est.labels(), &sim.z1_true).unwrap();
    let ari_pam = adjusted_rand(pam(&sim.d1, 10).unwrap().labels.labels(), &sim.z1_true).unwrap();
    (ari_tess, ari_pam)
}

/// Criterion 4: tessellation-independent with repulsion reaches median
/// ARI >= 0.95 at sigma 0.1 over 20 replicates, and beats PAM's median
/// at sigma 0.3.
#[test]
fn c4_simulation_reproduction() {
    let start = Instant::now();
    let tight: Vec<(f64, f64)> = (0..20).map(|r| fit_tessellation_ari(derive_seed(400, r), 0.1)).collect();
    let med_tight = median(&tight.iter().map(|x| x.0).collect::<Vec<_>>());
    let noisy: Vec<(f64, f64)> = (0..20).map(|r| fit_tessellation_ari(derive_seed(430, r), 0.3)).collect();
    let med_tess = median(&noisy.iter().map(|x| x.0).collect::<Vec<_>>());
    let med_pam = median(&noisy.iter().map(|x| x.1).collect::<Vec<_>>());
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "C4 simulation reproduction",
        med_tight >= 0.95 && med_tess > med_pam && elapsed < 1800.0,
        &format!(
            "sigma 0.1 median ARI {med_tight:.3}; sigma 0.3 tessellation {med_tess:.3} vs PAM {med_pam:.3}; {elapsed:.0}s"
        ),
    );
}

fn timed_loglik(d: &bdc::core::DistanceMatrix, cfg: &LikelihoodConfig, reps: usize) -> f64 {
    let k = 10;
    let step = d.n() / k;
    let medoids = MedoidSet::new((0..k).map(|i| i * step).collect(), d.n()).unwrap();
    let mut acc = 0.0;
    for _ in 0..3 {
        acc += loglik(d, &medoids, cfg).unwrap();
    }
    let mut best = f64::INFINITY;
    for _ in 0..5 {
        let t0 = Instant::now();
        for _ in 0..reps {
            acc += loglik(d, &medoids, cfg).unwrap();
        }
        best = best.min(t0.elapsed().as_secs_f64() / reps as f64);
    }
    std::hint::black_box(acc);
    best
}

fn regression_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Criterion 5: per-call cost scales sublinearly-in-log (slope < 1.3)
/// for the linear likelihood and superlinearly (slope > 1.7) for the
/// quadratic one across N in {250, 500, 1000, 2000}.
#[test]
fn c5_complexity_slopes() {
    let start = Instant::now();
    let sizes = [250usize, 500, 1000, 2000];
    let mut rng = ChaCha8Rng::seed_from_u64(9005);
    let mats: Vec<_> = sizes
        .iter()
        .map(|&n| {
            // clustered points in 10 dimensions
            let pts: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    let c = i % 10;
                    (0..10)
                        .map(|d| if d == c { 1.0 } else { 0.0 } + rng.random_range(-0.1..0.1))
                        .collect()
                })
                .collect();
            bdc::simulate::euclidean_distance_matrix(&pts).unwrap()
        })
        .collect();
    let cfg_lin =
        LikelihoodConfig::new(0.5, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0, Mode::Linear, true).unwrap();
    let cfg_quad = cfg_lin.with_mode(Mode::Quadratic);
    let ln_n: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let t_lin: Vec<f64> = mats
        .iter()
        .map(|d| timed_loglik(d, &cfg_lin, (400_000 / d.n()).max(20)).ln())
        .collect();
    let t_quad: Vec<f64> = mats
        .iter()
        .map(|d| timed_loglik(d, &cfg_quad, (2_000_000 / (d.n() * d.n() / 250)).max(3)).ln())
        .collect();
    let slope_lin = regression_slope(&ln_n, &t_lin);
    let slope_quad = regression_slope(&ln_n, &t_quad);
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "C5 complexity slopes",
        slope_lin < 1.3 && slope_quad > 1.7 && elapsed < 300.0,
        &format!("linear slope {slope_lin:.2} (< 1.3), quadratic slope {slope_quad:.2} (> 1.7), {elapsed:.0}s"),
    );
}

/// Criterion 6: exchangeability under 50 random object permutations
/// (log-likelihoods unchanged to 1e-10) and the exact largest-cluster
/// size N - K + 1 in the equal-distance construction.
#[test]
fn c6_exchangeability_and_microclustering() {
    let mut rng = ChaCha8Rng::seed_from_u64(9006);
    let n = 10;
    let d = random_matrix(n, 0.2, 4.0, &mut rng);
    let medoids = MedoidSet::new(vec![0, 3, 7], n).unwrap();
    let t = induce_partition(&d, &medoids);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut raw = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                raw[perm[i]][perm[j]] = d.get(i, j);
            }
        }
        let dp = validate_distance_matrix(&raw).unwrap();
        let mp =
            MedoidSet::new(medoids.indices().iter().map(|&m| perm[m]).collect(), n).unwrap();
        let tp = induce_partition(&dp, &mp);
        for repulsion in [false, true] {
            let cfgq = LikelihoodConfig::new(0.6, 2.2, 1.1, 1.4, 1.8, 1.2, 1.5, Mode::Quadratic, repulsion)
                .unwrap();
            let a = loglik_quadratic(&d, &t, &cfgq).unwrap();
            let b = loglik_quadratic(&dp, &tp, &cfgq).unwrap();
            worst = worst.max((a - b).abs());
            let cfgl = cfgq.with_mode(Mode::Linear);
            let a = loglik_linear(&d, &medoids, &t, &cfgl).unwrap();
            let b = loglik_linear(&dp, &mp, &tp, &cfgl).unwrap();
            worst = worst.max((a - b).abs());
        }
    }
    // microclustering counterexample: all distances to object 0 equal a
    let mut sizes_ok = true;
    for &(n, k) in &[(50usize, 3usize), (200, 5)] {
        let a = 1.0;
        let mut raw = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = if i == 0 { a } else { a + 1.0 + ((i * j) % 7) as f64 * 0.1 };
                raw[i][j] = v;
                raw[j][i] = v;
            }
        }
        let d = validate_distance_matrix(&raw).unwrap();
        let medoids = MedoidSet::new((0..k).collect(), n).unwrap();
        let t = induce_partition(&d, &medoids);
        let largest = t.sizes().into_iter().max().unwrap();
        sizes_ok &= largest == n - k + 1;
    }
    report(
        "C6 exchangeability and microclustering",
        worst <= 1e-10 && sizes_ok,
        &format!("max permutation deviation {worst:.2e}; largest-cluster sizes exact: {sizes_ok}"),
    );
}

/// Criterion 7: on 20 exhaustive instances the fixed-K posterior mode
/// under exp(-distance) cohesion coincides with the K-medoids optimum.
#[test]
fn c7_map_correspondence() {
    let mut rng = ChaCha8Rng::seed_from_u64(9007);
    let mut all_ok = true;
    for _ in 0..20 {
        let n = rng.random_range(6..=8);
        let k = rng.random_range(2..=3);
        let d = random_matrix(n, 0.1, 4.0, &mut rng);
        all_ok &= map_equivalence_check(&d, k);
    }
    report("C7 MAP correspondence", all_ok, "20/20 exhaustive instances agree");
}

/// Criterion 8: every retained nested draw satisfies the refinement
/// definition, and at alpha_s = 1, sigma_s = 0.1 the layer-2 point
/// estimate reaches median ARI >= 0.95 over 20 replicates.
#[test]
fn c8_nested_model() {
    let start = Instant::now();
    let mut aris = Vec::new();
    let mut all_nested = true;
    for r in 0..20 {
        let sim = simulate_two_layer(&SimConfig {
            sigma_s: 0.1,
            alpha_s: 1.0,
            seed: derive_seed(800, r),
            ..SimConfig::default()
        })
        .unwrap();
        let mv = MultiViewData::new(sim.d1.clone(), sim.d2.clone()).unwrap();
        let sel1 = select_hyperparameters(&sim.d1, (2, 30)).unwrap();
        let sel2 = select_hyperparameters(&sim.d2, (2, 30)).unwrap();
        let cfg1 = sel1.cfg.with_mode(Mode::Quadratic).with_repulsion(true);
        let cfg2 = sel2.cfg.with_mode(Mode::Quadratic).with_repulsion(true);
        let prior = MedoidPriorConfig::new(0.1, mv.n()).unwrap();
        let init = pam(&sim.d1, sel1.k_elbow).unwrap().medoids;
        let chain = ChainConfig::new(
            10_000,
            2_500,
            1,
            derive_seed(801, r),
            InitStrategy::Explicit(init),
        );
        let trace = run_nested(
            &mv,
            &LikelihoodSpec::Config(cfg1),
            &LikelihoodSpec::Config(cfg2),
            &prior,
            &prior,
            &chain,
        );
        for i in 0..trace.len() {
            let t1 = Partition::from_labels(&trace.labels(0)[i]);
            let t2 = Partition::from_labels(&trace.labels(1)[i]);
            all_nested &= is_refinement(&t2, &t1);
        }
        let est = point_estimate(trace.labels(1)).unwrap();
        aris.push(adjusted_rand(est.labels(), &sim.z2_true).unwrap());
    }
    let med = median(&aris);
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "C8 nested model",
        all_nested && med >= 0.95,
        &format!("refinement holds in all draws: {all_nested}; layer-2 median ARI {med:.3}; {elapsed:.0}s"),
    );
}

/// Criterion 9: the marginalized penalty matches direct alpha-space
/// quadrature to 1e-6 in log and is exactly zero at distance zero.
#[test]
fn c9_penalty_function() {
    let spec = QuadratureSpec::new(400_000, 1e-12);
    let mut worst: f64 = 0.0;
    for &(a, b) in &[(1.0, 1.0), (2.0, 2.0), (0.5, 3.0)] {
        let cfg = AlphaPriorConfig::new(a, b).unwrap();
        for &dist in &[0.01, 0.1, 1.0, 10.0] {
            let lc = log_penalty_c(dist, &cfg).unwrap();
            let lb = log_beta(a, b).unwrap();
            let num = integrate(
                |al: f64| {
                    if al <= 0.0 || al >= 1.0 {
                        return 0.0;
                    }
                    ((a - 1.0) * al.ln() + (b - 1.0) * (1.0 - al).ln() - dist * al / (1.0 - al)
                        - lb)
                        .exp()
                },
                0.0,
                1.0,
                &spec,
            )
            .unwrap();
            worst = worst.max((lc - num.ln()).abs());
        }
    }
    let zero_exact = log_penalty_c(0.0, &AlphaPriorConfig::new(2.0, 3.0).unwrap()).unwrap() == 0.0;
    report(
        "C9 penalty function",
        worst <= 1e-6 && zero_exact,
        &format!("max |log C - quadrature| = {worst:.2e}; C(0) exact: {zero_exact}"),
    );
}

/// Criterion 10: the dependent PY sampler reproduces the EPPF under a
/// flat likelihood at alpha = 0, keeps the layers identical at
/// alpha = 1, and draws alpha from the conjugate Beta full conditional.
#[test]
fn c10_py_dependent() {
    let mut rng = ChaCha8Rng::seed_from_u64(9010);
    let n = 5;
    let mv = MultiViewData::new(
        random_matrix(n, 0.2, 3.0, &mut rng),
        random_matrix(n, 0.2, 3.0, &mut rng),
    )
    .unwrap();
    let py = PYConfig::new(1.0, 0.01).unwrap();
    let alpha_prior = AlphaPriorConfig::new(1.0, 1.0).unwrap();
    // stationarity at alpha = 0: layer 2 marginal is the EPPF
    let chain = ChainConfig::new(60_000, 5_000, 1, 41, InitStrategy::RandomK(2));
    let trace = run_py_dependent(
        &mv,
        &LikelihoodSpec::Flat,
        &LikelihoodSpec::Flat,
        &py,
        &alpha_prior,
        &PyDependentOptions { fixed_alpha: Some(0.0) },
        &chain,
    );
    let mut emp: HashMap<Vec<usize>, f64> = HashMap::new();
    for z in trace.labels(1) {
        *emp.entry(canonical_labels(z)).or_insert(0.0) += 1.0;
    }
    emp.values_mut().for_each(|v| *v /= trace.len() as f64);
    let exact: HashMap<Vec<usize>, f64> = set_partitions(n)
        .into_iter()
        .map(|z| {
            let sizes = Partition::from_labels(&z).sizes();
            (z, log_py_eppf(&sizes, &py).exp())
        })
        .collect();
    let tv = tv_distance(&emp, &exact);

    // absorption at alpha = 1
    let chain1 = ChainConfig::new(2_000, 200, 1, 42, InitStrategy::RandomK(2));
    let trace1 = run_py_dependent(
        &mv,
        &LikelihoodSpec::Flat,
        &LikelihoodSpec::Flat,
        &py,
        &alpha_prior,
        &PyDependentOptions { fixed_alpha: Some(1.0) },
        &chain1,
    );
    let mut absorbed = true;
    for i in 0..trace1.len() {
        let t1 = Partition::from_labels(&trace1.labels(0)[i]);
        let t2 = Partition::from_labels(&trace1.labels(1)[i]);
        absorbed &= t1.same_blocks(&t2);
    }

    // conjugate alpha update: Beta(a + 3, b + 7) at N = 10
    let prior = AlphaPriorConfig::new(1.0, 1.0).unwrap();
    let draws: Vec<f64> =
        (0..10_000).map(|_| sample_alpha_conditional(3, 10, &prior, &mut rng)).collect();
    let mean = draws.iter().sum::<f64>() / draws.len() as f64;
    let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (draws.len() as f64 - 1.0);
    let exact_mean = 4.0 / 12.0;
    let exact_var: f64 = 4.0 * 8.0 / (144.0 * 13.0);
    let mean_ok = (mean - exact_mean).abs() < 4.0 * (exact_var / 10_000.0).sqrt();
    let var_ok = (var - exact_var).abs() < 0.15 * exact_var;

    report(
        "C10 PY dependent sampler",
        tv <= 0.05 && absorbed && mean_ok && var_ok,
        &format!("EPPF TV {tv:.4}; alpha=1 absorbed: {absorbed}; Beta moments mean {mean:.4}/var {var:.5}"),
    );
}
