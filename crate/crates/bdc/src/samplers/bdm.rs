//! Single-layer tessellation samplers: the birth-death-move chain and
//! the medoid-indicator Gibbs sweep.

use super::{
    accept_log, propose_bdm, resolve_init, scheduled_kind, ChainConfig, LayerTrace,
    LikelihoodSpec, TraceSet,
};
use crate::core::{induce_partition, DistanceMatrix, MedoidSet};
use crate::priors::{log_medoid_prior_k, MedoidPriorConfig};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Birth-death-move Metropolis-Hastings over medoid sets.
///
/// Even iterations swap one medoid for one non-medoid (Hastings factor
/// exactly 1); odd iterations flip a fair coin between a birth and a
/// death, with the boundary cases (death at K = 1, birth at K = N)
/// auto-rejected.
pub fn run_bdm(
    d: &DistanceMatrix,
    lik: &LikelihoodSpec,
    prior: &MedoidPriorConfig,
    chain: &ChainConfig,
) -> TraceSet {
    chain.validate();
    assert_eq!(prior.n, d.n(), "prior is sized for a different object count");
    let n = d.n();
    let mut rng = ChaCha8Rng::seed_from_u64(chain.seed);
    let mut medoids = resolve_init(d, &chain.init, &mut rng);
    let mut t = induce_partition(d, &medoids);
    let mut log_post = lik.eval_tess(d, &medoids, &t) + log_medoid_prior_k(medoids.k(), prior);

    let mut trace = TraceSet { layers: vec![LayerTrace::default()], ..TraceSet::default() };
    for iter in 1..=chain.iterations {
        let kind = scheduled_kind(iter, &mut rng);
        match propose_bdm(&medoids, n, kind, &mut rng) {
            None => trace.acceptance.count(kind, false),
            Some((proposal, log_beta)) => {
                let t_star = induce_partition(d, &proposal);
                let lp_star =
                    lik.eval_tess(d, &proposal, &t_star) + log_medoid_prior_k(proposal.k(), prior);
                let accepted = accept_log(lp_star - log_post + log_beta, &mut rng);
                trace.acceptance.count(kind, accepted);
                if accepted {
                    medoids = proposal;
                    t = t_star;
                    log_post = lp_star;
                }
            }
        }
        if chain.retained(iter) {
            trace.iters.push(iter);
            trace.layers[0].medoids.push(medoids.indices().to_vec());
            trace.layers[0].labels.push(t.labels().to_vec());
            trace.log_post.push(log_post);
        }
    }
    trace
}

/// Gibbs sweep over medoid indicators: each object is toggled in or out
/// of the medoid set by its full conditional. Removing the last medoid
/// is rejected with probability one (the prior has no K = 0 state).
pub fn run_gibbs_indicators(
    d: &DistanceMatrix,
    lik: &LikelihoodSpec,
    prior: &MedoidPriorConfig,
    chain: &ChainConfig,
) -> TraceSet {
    chain.validate();
    assert_eq!(prior.n, d.n(), "prior is sized for a different object count");
    let n = d.n();
    let mut rng = ChaCha8Rng::seed_from_u64(chain.seed);
    let mut is_medoid = vec![false; n];
    for &m in resolve_init(d, &chain.init, &mut rng).indices() {
        is_medoid[m] = true;
    }
    let gamma_of = |mask: &[bool]| -> MedoidSet {
        let idx: Vec<usize> = (0..n).filter(|&j| mask[j]).collect();
        MedoidSet::new(idx, n).expect("nonempty by the K >= 1 guard")
    };
    let posterior_of = |mask: &[bool]| -> f64 {
        let medoids = gamma_of(mask);
        let t = induce_partition(d, &medoids);
        lik.eval_tess(d, &medoids, &t) + log_medoid_prior_k(medoids.k(), prior)
    };
    let mut log_post = posterior_of(&is_medoid);

    let mut trace = TraceSet { layers: vec![LayerTrace::default()], ..TraceSet::default() };
    for iter in 1..=chain.iterations {
        for i in 0..n {
            let k_others = is_medoid.iter().filter(|&&m| m).count() - usize::from(is_medoid[i]);
            if k_others == 0 {
                // last medoid: the flip to zero has probability 0
                is_medoid[i] = true;
                continue;
            }
            // evaluate the flipped state; the current one is cached
            is_medoid[i] = !is_medoid[i];
            let lp_flipped = posterior_of(&is_medoid);
            is_medoid[i] = !is_medoid[i];
            let (lp_on, lp_off) = if is_medoid[i] {
                (log_post, lp_flipped)
            } else {
                (lp_flipped, log_post)
            };
            let p_on = 1.0 / (1.0 + (lp_off - lp_on).exp());
            let turn_on = rng.random::<f64>() < p_on;
            if turn_on != is_medoid[i] {
                is_medoid[i] = turn_on;
                log_post = lp_flipped;
            }
            trace.acceptance.gibbs_updates += 1;
        }
        if chain.retained(iter) {
            let medoids = gamma_of(&is_medoid);
            let t = induce_partition(d, &medoids);
            trace.iters.push(iter);
            trace.layers[0].medoids.push(medoids.indices().to_vec());
            trace.layers[0].labels.push(t.labels().to_vec());
            trace.log_post.push(log_post);
        }
    }
    trace
}
