//! Random-partition baselines: the independent Pitman-Yor marginal
//! Gibbs sampler and the stationary dependent two-layer variant with
//! per-object tie indicators.

use super::{resolve_init_labels, ChainConfig, LayerTrace, LikelihoodSpec, TraceSet};
use crate::core::{DistanceMatrix, MultiViewData};
use crate::likelihood::QuadStats;
use crate::numerics::log_sum_exp;
use crate::priors::{log_py_eppf, AlphaPriorConfig, PYConfig};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::Beta;

/// Snapshot of the dependent-sampler state; `kappa[i]` ties object i's
/// block across the layers.
#[derive(Debug, Clone, PartialEq)]
pub struct PYState {
    pub z1: Vec<usize>,
    pub z2: Vec<usize>,
    pub kappa: Vec<bool>,
    pub alpha: f64,
}

impl PYState {
    /// Compatibility: restricted to the tied objects, the two label
    /// vectors describe the same set partition.
    pub fn is_compatible(&self) -> bool {
        kappa_compatible(&self.z1, &self.z2, &self.kappa)
    }
}

pub(crate) fn kappa_compatible(z1: &[usize], z2: &[usize], kappa: &[bool]) -> bool {
    let tied: Vec<usize> = (0..kappa.len()).filter(|&i| kappa[i]).collect();
    for (a, &i) in tied.iter().enumerate() {
        for &j in tied.iter().skip(a + 1) {
            if (z1[i] == z1[j]) != (z2[i] == z2[j]) {
                return false;
            }
        }
    }
    true
}

/// Label bookkeeping with dense cluster ids; mirrors the compaction
/// semantics of [`QuadStats`] (an emptied cluster is renamed from the
/// last id) so the two stay interchangeable.
#[derive(Debug, Clone)]
struct FlatLabels {
    labels: Vec<Option<usize>>,
    sizes: Vec<usize>,
}

impl FlatLabels {
    fn new(labels: &[usize]) -> FlatLabels {
        let k = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0usize; k];
        for &z in labels {
            sizes[z] += 1;
        }
        FlatLabels { labels: labels.iter().map(|&z| Some(z)).collect(), sizes }
    }

    fn remove(&mut self, j: usize) {
        let c = self.labels[j].take().expect("assigned");
        self.sizes[c] -= 1;
        if self.sizes[c] == 0 {
            let last = self.sizes.len() - 1;
            if c != last {
                for z in self.labels.iter_mut().flatten() {
                    if *z == last {
                        *z = c;
                    }
                }
                self.sizes[c] = self.sizes[last];
            }
            self.sizes.truncate(last);
        }
    }

    fn insert(&mut self, j: usize, c: usize) {
        if c == self.sizes.len() {
            self.sizes.push(0);
        }
        self.labels[j] = Some(c);
        self.sizes[c] += 1;
    }
}

/// One layer of sampler state: either the quadratic marginal likelihood
/// with incremental statistics, or a flat likelihood over bare labels.
enum LayerState<'a> {
    Gamma(QuadStats<'a>),
    Flat(FlatLabels),
}

impl<'a> LayerState<'a> {
    fn new(d: &'a DistanceMatrix, labels: &[usize], lik: &LikelihoodSpec) -> LayerState<'a> {
        match lik.quadratic_config() {
            Some(cfg) => LayerState::Gamma(QuadStats::new(d, labels, cfg)),
            None => {
                assert!(
                    matches!(lik, LikelihoodSpec::Flat),
                    "partition samplers support the quadratic likelihood only"
                );
                LayerState::Flat(FlatLabels::new(labels))
            }
        }
    }

    fn labels(&self) -> Vec<usize> {
        match self {
            LayerState::Gamma(s) => s.labels(),
            LayerState::Flat(f) => f.labels.iter().map(|z| z.expect("assigned")).collect(),
        }
    }

    fn label_of(&self, j: usize) -> usize {
        match self {
            LayerState::Gamma(s) => s.label_of(j).expect("assigned"),
            LayerState::Flat(f) => f.labels[j].expect("assigned"),
        }
    }

    fn sizes(&self) -> Vec<usize> {
        match self {
            LayerState::Gamma(s) => s.sizes().to_vec(),
            LayerState::Flat(f) => f.sizes.clone(),
        }
    }

    fn n_clusters(&self) -> usize {
        match self {
            LayerState::Gamma(s) => s.n_clusters(),
            LayerState::Flat(f) => f.sizes.len(),
        }
    }

    fn remove(&mut self, j: usize) {
        match self {
            LayerState::Gamma(s) => s.remove(j),
            LayerState::Flat(f) => f.remove(j),
        }
    }

    fn insert(&mut self, j: usize, c: usize) {
        match self {
            LayerState::Gamma(s) => s.insert(j, c),
            LayerState::Flat(f) => f.insert(j, c),
        }
    }

    /// Log-likelihood deltas for inserting held-out `j` into each
    /// existing cluster or a new one (last entry).
    fn insertion_logliks(&self, j: usize) -> Vec<f64> {
        match self {
            LayerState::Gamma(s) => s.insertion_logliks(j),
            LayerState::Flat(f) => vec![0.0; f.sizes.len() + 1],
        }
    }

    fn loglik(&self) -> f64 {
        match self {
            LayerState::Gamma(s) => s.loglik(),
            LayerState::Flat(_) => 0.0,
        }
    }
}

/// EPPF weights of reseating held-out object `j`: existing clusters in
/// id order, then a new cluster.
fn eppf_candidate_logs(sizes: &[usize], py: &PYConfig) -> Vec<f64> {
    let k = sizes.len();
    let mut out = Vec::with_capacity(k + 1);
    for c in 0..k {
        let mut s = sizes.to_vec();
        s[c] += 1;
        out.push(log_py_eppf(&s, py));
    }
    let mut s = sizes.to_vec();
    s.push(1);
    out.push(log_py_eppf(&s, py));
    out
}

fn sample_from_log_weights(logs: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total = log_sum_exp(logs);
    assert!(total > f64::NEG_INFINITY, "no admissible candidate");
    let u: f64 = rng.random::<f64>();
    let mut acc = 0.0;
    for (c, &lw) in logs.iter().enumerate() {
        acc += (lw - total).exp();
        if u < acc {
            return c;
        }
    }
    logs.len() - 1
}

/// Marginal Gibbs sampler over labels with a PY EPPF prior and the
/// quadratic marginal likelihood (the only mode defined without
/// medoids).
pub fn run_py_independent(
    d: &DistanceMatrix,
    lik: &LikelihoodSpec,
    py: &PYConfig,
    chain: &ChainConfig,
) -> TraceSet {
    chain.validate();
    let n = d.n();
    let mut rng = ChaCha8Rng::seed_from_u64(chain.seed);
    let init = resolve_init_labels(d, &chain.init, &mut rng);
    let mut state = LayerState::new(d, &init, lik);
    let mut trace = TraceSet { layers: vec![LayerTrace::default()], ..TraceSet::default() };
    for iter in 1..=chain.iterations {
        for j in 0..n {
            state.remove(j);
            let lik_logs = state.insertion_logliks(j);
            let prior_logs = eppf_candidate_logs(&state.sizes(), py);
            let logs: Vec<f64> =
                lik_logs.iter().zip(prior_logs.iter()).map(|(a, b)| a + b).collect();
            let c = sample_from_log_weights(&logs, &mut rng);
            state.insert(j, c);
            trace.acceptance.gibbs_updates += 1;
        }
        if chain.retained(iter) {
            let labels = state.labels();
            let sizes = state.sizes();
            trace.iters.push(iter);
            trace.log_post.push(state.loglik() + log_py_eppf(&sizes, py));
            trace.layers[0].labels.push(labels);
        }
    }
    trace
}

/// Options for the dependent sampler. `fixed_alpha` pins the dependence
/// parameter instead of Gibbs-updating it (used by stationarity and
/// absorption checks).
#[derive(Debug, Clone, Copy, Default)]
pub struct PyDependentOptions {
    pub fixed_alpha: Option<f64>,
}

/// Beta(a + sum kappa, b + N - sum kappa) draw for the dependence
/// parameter's full conditional.
pub fn sample_alpha_conditional<R: Rng + ?Sized>(
    kappa_count: usize,
    n: usize,
    prior: &AlphaPriorConfig,
    rng: &mut R,
) -> f64 {
    let beta = Beta::new(prior.a + kappa_count as f64, prior.b + (n - kappa_count) as f64)
        .expect("positive parameters");
    rng.sample(beta)
}

/// EPPF log-probability of the z-partition restricted to the indices
/// where `member` holds.
fn reduced_log_eppf(z: &[usize], member: impl Fn(usize) -> bool, py: &PYConfig) -> f64 {
    let mut counts: Vec<(usize, usize)> = Vec::new();
    for (i, &zi) in z.iter().enumerate() {
        if member(i) {
            match counts.iter_mut().find(|(label, _)| *label == zi) {
                Some((_, c)) => *c += 1,
                None => counts.push((zi, 1)),
            }
        }
    }
    let sizes: Vec<usize> = counts.iter().map(|&(_, c)| c).collect();
    log_py_eppf(&sizes, py)
}

/// Stationary dependent two-layer sampler: Gibbs over the tie
/// indicators, the layer-2 labels of untied objects, all layer-1 labels
/// (subject to cross-layer compatibility), and the dependence parameter.
#[allow(clippy::too_many_arguments)]
pub fn run_py_dependent(
    mv: &MultiViewData,
    lik1: &LikelihoodSpec,
    lik2: &LikelihoodSpec,
    py: &PYConfig,
    alpha_prior: &AlphaPriorConfig,
    opts: &PyDependentOptions,
    chain: &ChainConfig,
) -> TraceSet {
    chain.validate();
    let n = mv.n();
    let mut rng = ChaCha8Rng::seed_from_u64(chain.seed);
    let init = resolve_init_labels(&mv.d1, &chain.init, &mut rng);
    // both layers start in the same partition, which is compatible with
    // any indicator configuration
    let mut s1 = LayerState::new(&mv.d1, &init, lik1);
    let mut s2 = LayerState::new(&mv.d2, &init, lik2);
    let mut kappa = vec![true; n];
    let mut alpha = opts
        .fixed_alpha
        .unwrap_or(alpha_prior.a / (alpha_prior.a + alpha_prior.b));

    let mut trace = TraceSet {
        layers: vec![LayerTrace::default(), LayerTrace::default()],
        ..TraceSet::default()
    };
    for iter in 1..=chain.iterations {
        let z1 = s1.labels();
        let z2 = s2.labels();
        // tie indicators
        for i in 0..n {
            // compatibility of adding i to the tied set
            let compatible = (0..n)
                .filter(|&j| j != i && kappa[j])
                .all(|j| (z1[i] == z1[j]) == (z2[i] == z2[j]));
            if !compatible {
                kappa[i] = false;
                continue;
            }
            if alpha >= 1.0 {
                kappa[i] = true;
                continue;
            }
            if alpha <= 0.0 {
                kappa[i] = false;
                continue;
            }
            let lp_plus = reduced_log_eppf(&z2, |j| (j != i && kappa[j]) || j == i, py);
            let lp_minus = reduced_log_eppf(&z2, |j| j != i && kappa[j], py);
            let ratio = (lp_plus - lp_minus).exp();
            let p1 = alpha / (alpha + (1.0 - alpha) * ratio);
            kappa[i] = rng.random::<f64>() < p1;
        }
        // layer-2 labels for untied objects
        for j in 0..n {
            if kappa[j] {
                continue;
            }
            s2.remove(j);
            let lik_logs = s2.insertion_logliks(j);
            let prior_logs = eppf_candidate_logs(&s2.sizes(), py);
            let logs: Vec<f64> =
                lik_logs.iter().zip(prior_logs.iter()).map(|(a, b)| a + b).collect();
            let c = sample_from_log_weights(&logs, &mut rng);
            s2.insert(j, c);
            trace.acceptance.gibbs_updates += 1;
        }
        // layer-1 labels, constrained to keep the reduced partitions equal
        let z2 = s2.labels();
        for j in 0..n {
            s1.remove(j);
            let lik_logs = s1.insertion_logliks(j);
            let prior_logs = eppf_candidate_logs(&s1.sizes(), py);
            let k1 = s1.n_clusters();
            let mut logs: Vec<f64> =
                lik_logs.iter().zip(prior_logs.iter()).map(|(a, b)| a + b).collect();
            if kappa[j] {
                // candidate cluster must hold exactly the tied objects
                // sharing j's layer-2 block
                let z1_now: Vec<Option<usize>> =
                    (0..n).map(|i| if i == j { None } else { Some(s1.label_of(i)) }).collect();
                for (c, lw) in logs.iter_mut().enumerate() {
                    let ok = (0..n).filter(|&i| i != j && kappa[i]).all(|i| {
                        let joins_c = c < k1 && z1_now[i] == Some(c);
                        let same_z2 = z2[i] == z2[j];
                        joins_c == same_z2
                    });
                    if !ok {
                        *lw = f64::NEG_INFINITY;
                    }
                }
            }
            let c = sample_from_log_weights(&logs, &mut rng);
            s1.insert(j, c);
            trace.acceptance.gibbs_updates += 1;
        }
        // dependence parameter
        let ties = kappa.iter().filter(|&&k| k).count();
        if opts.fixed_alpha.is_none() {
            alpha = sample_alpha_conditional(ties, n, alpha_prior, &mut rng);
        }
        debug_assert!(kappa_compatible(&s1.labels(), &s2.labels(), &kappa));
        if chain.retained(iter) {
            let z1 = s1.labels();
            let z2 = s2.labels();
            // joint log density up to the alpha/kappa prior factors
            let lp = s1.loglik()
                + s2.loglik()
                + log_py_eppf(&s1.sizes(), py)
                + log_py_eppf(&s2.sizes(), py)
                - reduced_log_eppf(&z2, |j| kappa[j], py);
            trace.iters.push(iter);
            trace.layers[0].labels.push(z1);
            trace.layers[1].labels.push(z2);
            trace.alpha.push(alpha);
            trace.log_post.push(lp);
        }
    }
    trace
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::validate_distance_matrix;
    use crate::samplers::InitStrategy;

    fn small_matrix(n: usize, seed: u64) -> DistanceMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut raw = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v: f64 = rng.random_range(0.2..3.0);
                raw[i][j] = v;
                raw[j][i] = v;
            }
        }
        validate_distance_matrix(&raw).unwrap()
    }

    #[test]
    fn single_object_is_one_cluster() {
        let d = validate_distance_matrix(&[vec![0.0]]).unwrap();
        let py = PYConfig::new(1.0, 0.0).unwrap();
        let chain = ChainConfig::new(50, 10, 1, 1, InitStrategy::RandomK(1));
        let trace = run_py_independent(&d, &LikelihoodSpec::Flat, &py, &chain);
        for z in trace.labels(0) {
            assert_eq!(z, &vec![0usize]);
        }
    }

    #[test]
    fn independent_sampler_is_reproducible() {
        let d = small_matrix(6, 51);
        let py = PYConfig::new(1.0, 0.01).unwrap();
        let chain = ChainConfig::new(300, 100, 1, 77, InitStrategy::RandomK(2));
        let a = run_py_independent(&d, &LikelihoodSpec::Flat, &py, &chain);
        let b = run_py_independent(&d, &LikelihoodSpec::Flat, &py, &chain);
        assert_eq!(a.layers[0].labels, b.layers[0].labels);
    }

    #[test]
    fn alpha_one_keeps_layers_identical() {
        let d1 = small_matrix(7, 52);
        let d2 = small_matrix(7, 53);
        let mv = MultiViewData::new(d1, d2).unwrap();
        let py = PYConfig::new(1.0, 0.0).unwrap();
        let alpha_prior = AlphaPriorConfig::new(1.0, 1.0).unwrap();
        let opts = PyDependentOptions { fixed_alpha: Some(1.0) };
        let chain = ChainConfig::new(200, 20, 1, 5, InitStrategy::RandomK(2));
        let trace = run_py_dependent(
            &mv,
            &LikelihoodSpec::Flat,
            &LikelihoodSpec::Flat,
            &py,
            &alpha_prior,
            &opts,
            &chain,
        );
        for i in 0..trace.len() {
            let t1 = crate::core::Partition::from_labels(&trace.layers[0].labels[i]);
            let t2 = crate::core::Partition::from_labels(&trace.layers[1].labels[i]);
            assert!(t1.same_blocks(&t2), "draw {i} diverged");
        }
    }

    #[test]
    fn alpha_conditional_is_beta() {
        // moments of Beta(4, 8) from (a, b) = (1, 1), n = 10, ties = 3
        let prior = AlphaPriorConfig::new(1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        let n = 10_000;
        let draws: Vec<f64> =
            (0..n).map(|_| sample_alpha_conditional(3, 10, &prior, &mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        let exact_mean = 4.0 / 12.0;
        let exact_var = 4.0 * 8.0 / (12.0f64.powi(2) * 13.0);
        let se_mean = (exact_var / n as f64).sqrt();
        assert!((mean - exact_mean).abs() < 4.0 * se_mean, "mean {mean}");
        assert!((var - exact_var).abs() < 0.2 * exact_var, "var {var}");
    }

    #[test]
    fn py_state_compatibility_is_block_level() {
        // tied objects 0 and 1 share a block in both layers even though
        // the label names differ
        let ok = PYState {
            z1: vec![0, 0, 1, 2],
            z2: vec![5, 5, 5, 9],
            kappa: vec![true, true, false, true],
            alpha: 0.5,
        };
        assert!(ok.is_compatible());
        // 0 and 3 tied, together in layer 1 but apart in layer 2
        let bad = PYState {
            z1: vec![0, 1, 1, 0],
            z2: vec![0, 1, 1, 2],
            kappa: vec![true, false, false, true],
            alpha: 0.5,
        };
        assert!(!bad.is_compatible());
        // untied objects never constrain anything
        let free = PYState { kappa: vec![false; 4], ..bad };
        assert!(free.is_compatible());
    }

    #[test]
    fn dependent_state_stays_compatible() {
        let d1 = small_matrix(6, 55);
        let d2 = small_matrix(6, 56);
        let mv = MultiViewData::new(d1, d2).unwrap();
        let py = PYConfig::new(1.0, 0.0).unwrap();
        let alpha_prior = AlphaPriorConfig::new(2.0, 2.0).unwrap();
        let chain = ChainConfig::new(300, 0, 1, 6, InitStrategy::RandomK(2));
        let trace = run_py_dependent(
            &mv,
            &LikelihoodSpec::Flat,
            &LikelihoodSpec::Flat,
            &py,
            &alpha_prior,
            &PyDependentOptions::default(),
            &chain,
        );
        assert_eq!(trace.alpha.len(), trace.len());
        assert!(trace.alpha.iter().all(|&a| (0.0..=1.0).contains(&a)));
    }
}
