//! Joint tessellation sampler: independent tessellations per layer tied
//! together by the marginalized partition-distance penalty, plus a small
//! indicator-Gibbs variant used to cross-validate the kernel at small N.

use super::{
    accept_log, propose_bdm, resolve_init, scheduled_kind, ChainConfig, LayerTrace,
    LikelihoodSpec, TraceSet,
};
use crate::core::{induce_partition, DistanceMatrix, MedoidSet, MultiViewData, Partition};
use crate::priors::{
    log_medoid_prior_k, log_penalty_c, partition_distance, AlphaPosteriorSampler,
    AlphaPriorConfig, MedoidPriorConfig,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// Penalty evaluations repeat the same few distance values over and over
/// (the Rand index is a ratio of pair counts), so cache by bit pattern.
#[derive(Default)]
struct PenaltyCache {
    inner: HashMap<u64, f64>,
}

impl PenaltyCache {
    fn log_c(&mut self, d: f64, cfg: &AlphaPriorConfig) -> f64 {
        if d == 0.0 {
            return 0.0;
        }
        if d.is_infinite() {
            return f64::NEG_INFINITY;
        }
        *self
            .inner
            .entry(d.to_bits())
            .or_insert_with(|| log_penalty_c(d, cfg).expect("finite nonnegative distance"))
    }
}

#[allow(clippy::too_many_arguments)]
pub fn run_joint(
    mv: &MultiViewData,
    lik1: &LikelihoodSpec,
    lik2: &LikelihoodSpec,
    prior1: &MedoidPriorConfig,
    prior2: &MedoidPriorConfig,
    alpha_prior: &AlphaPriorConfig,
    chain: &ChainConfig,
) -> TraceSet {
    chain.validate();
    let n = mv.n();
    assert_eq!(prior1.n, n);
    assert_eq!(prior2.n, n);
    let mut rng = ChaCha8Rng::seed_from_u64(chain.seed);
    let mut penalty = PenaltyCache::default();
    let mut gamma1 = resolve_init(&mv.d1, &chain.init, &mut rng);
    let mut gamma2 = resolve_init(&mv.d2, &chain.init, &mut rng);
    let mut t1 = induce_partition(&mv.d1, &gamma1);
    let mut t2 = induce_partition(&mv.d2, &gamma2);
    let mut lp1 = lik1.eval_tess(&mv.d1, &gamma1, &t1) + log_medoid_prior_k(gamma1.k(), prior1);
    let mut lp2 = lik2.eval_tess(&mv.d2, &gamma2, &t2) + log_medoid_prior_k(gamma2.k(), prior2);
    let mut dist = partition_distance(&t1, &t2);
    let mut log_c = penalty.log_c(dist, alpha_prior);

    let mut trace = TraceSet {
        layers: vec![LayerTrace::default(), LayerTrace::default()],
        ..TraceSet::default()
    };
    let mut retained_dists: Vec<f64> = Vec::new();
    for iter in 1..=chain.iterations {
        // layer 1
        let kind = scheduled_kind(iter, &mut rng);
        match propose_bdm(&gamma1, n, kind, &mut rng) {
            None => trace.acceptance.count(kind, false),
            Some((g1_star, log_beta)) => {
                let t1_star = induce_partition(&mv.d1, &g1_star);
                let lp1_star = lik1.eval_tess(&mv.d1, &g1_star, &t1_star)
                    + log_medoid_prior_k(g1_star.k(), prior1);
                let dist_star = partition_distance(&t1_star, &t2);
                let log_c_star = penalty.log_c(dist_star, alpha_prior);
                let delta = lp1_star + log_c_star - lp1 - log_c + log_beta;
                let accepted = log_c_star > f64::NEG_INFINITY && accept_log(delta, &mut rng);
                trace.acceptance.count(kind, accepted);
                if accepted {
                    gamma1 = g1_star;
                    t1 = t1_star;
                    lp1 = lp1_star;
                    dist = dist_star;
                    log_c = log_c_star;
                }
            }
        }
        // layer 2
        let kind = scheduled_kind(iter, &mut rng);
        match propose_bdm(&gamma2, n, kind, &mut rng) {
            None => trace.acceptance.count(kind, false),
            Some((g2_star, log_beta)) => {
                let t2_star = induce_partition(&mv.d2, &g2_star);
                let lp2_star = lik2.eval_tess(&mv.d2, &g2_star, &t2_star)
                    + log_medoid_prior_k(g2_star.k(), prior2);
                let dist_star = partition_distance(&t1, &t2_star);
                let log_c_star = penalty.log_c(dist_star, alpha_prior);
                let delta = lp2_star + log_c_star - lp2 - log_c + log_beta;
                let accepted = log_c_star > f64::NEG_INFINITY && accept_log(delta, &mut rng);
                trace.acceptance.count(kind, accepted);
                if accepted {
                    gamma2 = g2_star;
                    t2 = t2_star;
                    lp2 = lp2_star;
                    dist = dist_star;
                    log_c = log_c_star;
                }
            }
        }
        if chain.retained(iter) {
            trace.iters.push(iter);
            trace.layers[0].medoids.push(gamma1.indices().to_vec());
            trace.layers[0].labels.push(t1.labels().to_vec());
            trace.layers[1].medoids.push(gamma2.indices().to_vec());
            trace.layers[1].labels.push(t2.labels().to_vec());
            trace.log_post.push(lp1 + lp2 + log_c);
            retained_dists.push(dist);
        }
    }
    // dependence-parameter draws for the retained states, one per draw,
    // with the gridded sampler cached per distinct distance
    let mut samplers: HashMap<u64, AlphaPosteriorSampler> = HashMap::new();
    trace.alpha = retained_dists
        .iter()
        .map(|&d| {
            if d.is_infinite() {
                return 0.0;
            }
            samplers
                .entry(d.to_bits())
                .or_insert_with(|| AlphaPosteriorSampler::new(d, alpha_prior))
                .sample(&mut rng)
        })
        .collect();
    trace
}

/// Indicator-Gibbs variant of the joint model: every object of every
/// layer is toggled by its full conditional, which includes the penalty.
/// Quadratic cost per sweep; used to cross-check [`run_joint`] at small
/// N rather than exposed as a production path.
#[allow(clippy::too_many_arguments)]
pub fn run_joint_gibbs(
    mv: &MultiViewData,
    lik1: &LikelihoodSpec,
    lik2: &LikelihoodSpec,
    prior1: &MedoidPriorConfig,
    prior2: &MedoidPriorConfig,
    alpha_prior: &AlphaPriorConfig,
    chain: &ChainConfig,
) -> TraceSet {
    chain.validate();
    let n = mv.n();
    let mut rng = ChaCha8Rng::seed_from_u64(chain.seed);
    let mut penalty = PenaltyCache::default();
    let mut mask1 = vec![false; n];
    let mut mask2 = vec![false; n];
    for &m in resolve_init(&mv.d1, &chain.init, &mut rng).indices() {
        mask1[m] = true;
    }
    for &m in resolve_init(&mv.d2, &chain.init, &mut rng).indices() {
        mask2[m] = true;
    }
    fn state_of(mask: &[bool], d: &DistanceMatrix) -> (MedoidSet, Partition) {
        let n = mask.len();
        let g = MedoidSet::new((0..n).filter(|&j| mask[j]).collect(), n).expect("nonempty");
        let t = induce_partition(d, &g);
        (g, t)
    }
    #[allow(clippy::too_many_arguments)]
    fn eval_joint(
        mv: &MultiViewData,
        lik1: &LikelihoodSpec,
        lik2: &LikelihoodSpec,
        prior1: &MedoidPriorConfig,
        prior2: &MedoidPriorConfig,
        alpha_prior: &AlphaPriorConfig,
        penalty: &mut PenaltyCache,
        mask1: &[bool],
        mask2: &[bool],
    ) -> f64 {
        let (g1, t1) = state_of(mask1, &mv.d1);
        let (g2, t2) = state_of(mask2, &mv.d2);
        lik1.eval_tess(&mv.d1, &g1, &t1)
            + lik2.eval_tess(&mv.d2, &g2, &t2)
            + log_medoid_prior_k(g1.k(), prior1)
            + log_medoid_prior_k(g2.k(), prior2)
            + penalty.log_c(partition_distance(&t1, &t2), alpha_prior)
    }

    let mut trace = TraceSet {
        layers: vec![LayerTrace::default(), LayerTrace::default()],
        ..TraceSet::default()
    };
    for iter in 1..=chain.iterations {
        for layer in 0..2 {
            for i in 0..n {
                let mask = if layer == 0 { &mut mask1 } else { &mut mask2 };
                let k_others = mask.iter().filter(|&&m| m).count() - usize::from(mask[i]);
                if k_others == 0 {
                    mask[i] = true;
                    continue;
                }
                mask[i] = true;
                let lp_on = eval_joint(
                    mv, lik1, lik2, prior1, prior2, alpha_prior, &mut penalty, &mask1, &mask2,
                );
                let mask = if layer == 0 { &mut mask1 } else { &mut mask2 };
                mask[i] = false;
                let lp_off = eval_joint(
                    mv, lik1, lik2, prior1, prior2, alpha_prior, &mut penalty, &mask1, &mask2,
                );
                let p_on = 1.0 / (1.0 + (lp_off - lp_on).exp());
                let mask = if layer == 0 { &mut mask1 } else { &mut mask2 };
                mask[i] = rng.random::<f64>() < p_on;
                trace.acceptance.gibbs_updates += 1;
            }
        }
        if chain.retained(iter) {
            let (g1, t1) = state_of(&mask1, &mv.d1);
            let (g2, t2) = state_of(&mask2, &mv.d2);
            let dist = partition_distance(&t1, &t2);
            let lp = lik1.eval_tess(&mv.d1, &g1, &t1)
                + lik2.eval_tess(&mv.d2, &g2, &t2)
                + log_medoid_prior_k(g1.k(), prior1)
                + log_medoid_prior_k(g2.k(), prior2)
                + penalty.log_c(dist, alpha_prior);
            trace.iters.push(iter);
            trace.layers[0].medoids.push(g1.indices().to_vec());
            trace.layers[0].labels.push(t1.labels().to_vec());
            trace.layers[1].medoids.push(g2.indices().to_vec());
            trace.layers[1].labels.push(t2.labels().to_vec());
            trace.log_post.push(lp);
        }
    }
    trace
}
