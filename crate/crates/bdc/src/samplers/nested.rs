//! Two-layer nested tessellation sampler: a birth-death-move step on
//! layer 1 with automatic repair of the layer-2 medoid set, followed by
//! restricted birth-death-move steps for layer 2 inside every layer-1
//! cluster.

use super::{
    accept_log, bdm_log_hastings, propose_bdm, resolve_init, scheduled_kind, ChainConfig,
    LayerTrace, LikelihoodSpec, MoveKind, TraceSet,
};
use crate::core::{
    induce_partition, induce_second_layer, is_refinement, MedoidSet, MultiViewData, Partition,
};
use crate::priors::{log_medoid_prior_k, MedoidPriorConfig};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Repair a layer-2 medoid set against an explicit layer-1 tessellation:
/// clusters without a layer-2 medoid gain their layer-1 medoid.
fn repair_against(
    t1: &Partition,
    gamma1: &MedoidSet,
    gamma2: &MedoidSet,
    n: usize,
) -> MedoidSet {
    let mut indices = gamma2.indices().to_vec();
    for (c, roster) in t1.clusters().iter().enumerate() {
        if roster.is_empty() {
            continue;
        }
        if !roster.iter().any(|&j| gamma2.contains(j)) {
            indices.push(gamma1.indices()[c]);
        }
    }
    MedoidSet::new(indices, n).expect("repair preserves validity")
}

pub fn run_nested(
    mv: &MultiViewData,
    lik1: &LikelihoodSpec,
    lik2: &LikelihoodSpec,
    prior1: &MedoidPriorConfig,
    prior2: &MedoidPriorConfig,
    chain: &ChainConfig,
) -> TraceSet {
    chain.validate();
    let n = mv.n();
    assert_eq!(prior1.n, n, "layer-1 prior sized for a different object count");
    assert_eq!(prior2.n, n, "layer-2 prior sized for a different object count");
    let mut rng = ChaCha8Rng::seed_from_u64(chain.seed);
    let mut gamma1 = resolve_init(&mv.d1, &chain.init, &mut rng);
    let mut t1 = induce_partition(&mv.d1, &gamma1);
    let mut gamma2 = repair_against(&t1, &gamma1, &resolve_init(&mv.d2, &chain.init, &mut rng), n);
    let mut t2 = induce_second_layer(mv, &t1, &gamma2).expect("repaired set is valid");
    let mut lp1 = lik1.eval_tess(&mv.d1, &gamma1, &t1) + log_medoid_prior_k(gamma1.k(), prior1);
    let mut lp2 = lik2.eval_tess(&mv.d2, &gamma2, &t2) + log_medoid_prior_k(gamma2.k(), prior2);

    let mut trace = TraceSet {
        layers: vec![LayerTrace::default(), LayerTrace::default()],
        ..TraceSet::default()
    };
    for iter in 1..=chain.iterations {
        // layer-1 proposal with repair, accepted jointly: the repair
        // couples the two medoid sets so both ratios enter
        let kind = scheduled_kind(iter, &mut rng);
        match propose_bdm(&gamma1, n, kind, &mut rng) {
            None => trace.acceptance.count(kind, false),
            Some((g1_star, log_beta)) => {
                let t1_star = induce_partition(&mv.d1, &g1_star);
                let g2_star = repair_against(&t1_star, &g1_star, &gamma2, n);
                let t2_star =
                    induce_second_layer(mv, &t1_star, &g2_star).expect("repaired set is valid");
                let lp1_star = lik1.eval_tess(&mv.d1, &g1_star, &t1_star)
                    + log_medoid_prior_k(g1_star.k(), prior1);
                let lp2_star = lik2.eval_tess(&mv.d2, &g2_star, &t2_star)
                    + log_medoid_prior_k(g2_star.k(), prior2);
                let delta = lp1_star + lp2_star - lp1 - lp2 + log_beta;
                let accepted = accept_log(delta, &mut rng);
                trace.acceptance.count(kind, accepted);
                if accepted {
                    gamma1 = g1_star;
                    t1 = t1_star;
                    gamma2 = g2_star;
                    t2 = t2_star;
                    lp1 = lp1_star;
                    lp2 = lp2_star;
                }
            }
        }
        // layer-2 updates restricted to each layer-1 cluster
        for pos in 0..gamma1.k() {
            let roster = t1.cluster(pos);
            if roster.is_empty() {
                continue;
            }
            let in_cluster: Vec<usize> =
                roster.iter().copied().filter(|&j| gamma2.contains(j)).collect();
            let free: Vec<usize> =
                roster.iter().copied().filter(|&j| !gamma2.contains(j)).collect();
            let kind = scheduled_kind(iter, &mut rng);
            let proposal = match kind {
                MoveKind::Move => {
                    if free.is_empty() {
                        None
                    } else {
                        let out = in_cluster[rng.random_range(0..in_cluster.len())];
                        let inn = free[rng.random_range(0..free.len())];
                        let mut idx = gamma2.indices().to_vec();
                        idx.retain(|&m| m != out);
                        idx.push(inn);
                        Some((MedoidSet::new(idx, n).expect("valid"), 0.0))
                    }
                }
                MoveKind::Birth => {
                    if free.is_empty() {
                        None
                    } else {
                        let inn = free[rng.random_range(0..free.len())];
                        let mut idx = gamma2.indices().to_vec();
                        idx.push(inn);
                        let log_beta = bdm_log_hastings(
                            MoveKind::Birth,
                            in_cluster.len(),
                            roster.len(),
                        );
                        Some((MedoidSet::new(idx, n).expect("valid"), log_beta))
                    }
                }
                MoveKind::Death => {
                    // the cluster must keep at least one layer-2 medoid
                    if in_cluster.len() < 2 {
                        None
                    } else {
                        let out = in_cluster[rng.random_range(0..in_cluster.len())];
                        let mut idx = gamma2.indices().to_vec();
                        idx.retain(|&m| m != out);
                        let log_beta = bdm_log_hastings(
                            MoveKind::Death,
                            in_cluster.len(),
                            roster.len(),
                        );
                        Some((MedoidSet::new(idx, n).expect("valid"), log_beta))
                    }
                }
            };
            match proposal {
                None => trace.acceptance.count(kind, false),
                Some((g2_star, log_beta)) => {
                    let t2_star =
                        induce_second_layer(mv, &t1, &g2_star).expect("cluster stays covered");
                    let lp2_star = lik2.eval_tess(&mv.d2, &g2_star, &t2_star)
                        + log_medoid_prior_k(g2_star.k(), prior2);
                    let accepted = accept_log(lp2_star - lp2 + log_beta, &mut rng);
                    trace.acceptance.count(kind, accepted);
                    if accepted {
                        gamma2 = g2_star;
                        t2 = t2_star;
                        lp2 = lp2_star;
                    }
                }
            }
        }
        debug_assert!(is_refinement(&t2, &t1));
        if chain.retained(iter) {
            trace.iters.push(iter);
            trace.layers[0].medoids.push(gamma1.indices().to_vec());
            trace.layers[0].labels.push(t1.labels().to_vec());
            trace.layers[1].medoids.push(gamma2.indices().to_vec());
            trace.layers[1].labels.push(t2.labels().to_vec());
            trace.log_post.push(lp1 + lp2);
        }
    }
    trace
}
