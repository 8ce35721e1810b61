//! MCMC kernels and chain orchestration.
//!
//! All samplers share the same conventions: one chain owns one RNG
//! stream seeded from `ChainConfig::seed`, acceptance ratios are
//! computed in log space as `exp(min(0, delta))`, and draws are retained
//! after burn-in at the configured thinning.

mod bdm;
mod joint;
mod nested;
mod py;

pub use bdm::{run_bdm, run_gibbs_indicators};
pub use joint::{run_joint, run_joint_gibbs};
pub use nested::run_nested;
pub use py::{
    run_py_dependent, run_py_independent, sample_alpha_conditional, PyDependentOptions, PYState,
};

use crate::core::{induce_partition, DistanceMatrix, MedoidSet, Partition};
use crate::io::TraceRecord;
use crate::kmedoids::{default_k_range, elbow_k, pam};
use crate::likelihood::{
    loglik_linear_unchecked, loglik_quadratic_unchecked, LikelihoodConfig, Mode,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// How a chain picks its starting medoid set (or partition, for the
/// label-based samplers).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitStrategy {
    /// k medoids drawn uniformly without replacement
    RandomK(usize),
    /// PAM at the elbow-selected K
    FromPam,
    Explicit(MedoidSet),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    pub iterations: u64,
    pub burn_in: u64,
    pub thin: u64,
    pub seed: u64,
    pub init: InitStrategy,
}

impl ChainConfig {
    pub fn new(iterations: u64, burn_in: u64, thin: u64, seed: u64, init: InitStrategy) -> ChainConfig {
        let cfg = ChainConfig { iterations, burn_in, thin, seed, init };
        cfg.validate();
        cfg
    }

    pub fn validate(&self) {
        assert!(self.burn_in < self.iterations, "burn_in must be below iterations");
        assert!(self.thin >= 1, "thin must be at least 1");
    }

    #[inline]
    pub(crate) fn retained(&self, iter: u64) -> bool {
        iter > self.burn_in && (iter - self.burn_in) % self.thin == 0
    }
}

/// Likelihood plugged into a sampler: the configured Gamma model, or a
/// flat (constant) likelihood so a chain targets its prior; the latter
/// is the master detailed-balance check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LikelihoodSpec {
    Config(LikelihoodConfig),
    Flat,
}

impl LikelihoodSpec {
    /// Log-likelihood of a tessellation state.
    pub(crate) fn eval_tess(&self, d: &DistanceMatrix, medoids: &MedoidSet, t: &Partition) -> f64 {
        match self {
            LikelihoodSpec::Flat => 0.0,
            LikelihoodSpec::Config(cfg) => match cfg.mode {
                Mode::Quadratic => loglik_quadratic_unchecked(d, t, cfg),
                Mode::Linear => loglik_linear_unchecked(d, medoids, t, cfg),
            },
        }
    }

    pub(crate) fn quadratic_config(&self) -> Option<&LikelihoodConfig> {
        match self {
            LikelihoodSpec::Config(cfg) if cfg.mode == Mode::Quadratic => Some(cfg),
            _ => None,
        }
    }
}

/// Per-move-type proposal and acceptance counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct AcceptanceStats {
    pub birth_proposed: u64,
    pub birth_accepted: u64,
    pub death_proposed: u64,
    pub death_accepted: u64,
    pub move_proposed: u64,
    pub move_accepted: u64,
    pub gibbs_updates: u64,
}

impl AcceptanceStats {
    pub(crate) fn count(&mut self, kind: MoveKind, accepted: bool) {
        let (p, a) = match kind {
            MoveKind::Birth => (&mut self.birth_proposed, &mut self.birth_accepted),
            MoveKind::Death => (&mut self.death_proposed, &mut self.death_accepted),
            MoveKind::Move => (&mut self.move_proposed, &mut self.move_accepted),
        };
        *p += 1;
        if accepted {
            *a += 1;
        }
    }
}

/// Retained draws of one layer.
#[derive(Debug, Clone, Default)]
pub struct LayerTrace {
    /// medoid sets per retained draw; empty for label-based samplers
    pub medoids: Vec<Vec<usize>>,
    pub labels: Vec<Vec<usize>>,
}

/// Retained draws of a chain.
#[derive(Debug, Clone, Default)]
pub struct TraceSet {
    pub iters: Vec<u64>,
    pub layers: Vec<LayerTrace>,
    /// dependence-parameter draws; empty when not applicable
    pub alpha: Vec<f64>,
    pub log_post: Vec<f64>,
    pub acceptance: AcceptanceStats,
}

impl TraceSet {
    pub fn len(&self) -> usize {
        self.iters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iters.is_empty()
    }

    pub fn labels(&self, layer: usize) -> &[Vec<usize>] {
        &self.layers[layer].labels
    }

    pub fn medoid_draws(&self, layer: usize) -> &[Vec<usize>] {
        &self.layers[layer].medoids
    }

    /// Convert to on-disk records (1-based indices).
    pub fn to_records(&self, chain: u32) -> Vec<TraceRecord> {
        let has_medoids = self.layers.iter().any(|l| !l.medoids.is_empty());
        (0..self.len())
            .map(|i| TraceRecord {
                iter: self.iters[i],
                chain,
                medoids: has_medoids.then(|| {
                    self.layers
                        .iter()
                        .map(|l| l.medoids[i].iter().map(|&m| m + 1).collect())
                        .collect()
                }),
                labels: self
                    .layers
                    .iter()
                    .map(|l| l.labels[i].iter().map(|&z| z + 1).collect())
                    .collect(),
                alpha: (!self.alpha.is_empty()).then(|| self.alpha[i]),
                log_post: self.log_post[i],
            })
            .collect()
    }

    /// Rebuild a trace from on-disk records (acceptance telemetry is not
    /// stored per record and comes back zeroed).
    pub fn from_records(records: &[TraceRecord]) -> TraceSet {
        let mut trace = TraceSet::default();
        if records.is_empty() {
            return trace;
        }
        let n_layers = records[0].labels.len();
        trace.layers = vec![LayerTrace::default(); n_layers];
        for rec in records {
            trace.iters.push(rec.iter);
            trace.log_post.push(rec.log_post);
            if let Some(a) = rec.alpha {
                trace.alpha.push(a);
            }
            for (layer, labels) in rec.labels.iter().enumerate() {
                trace.layers[layer]
                    .labels
                    .push(labels.iter().map(|&z| z - 1).collect());
                if let Some(meds) = &rec.medoids {
                    trace.layers[layer]
                        .medoids
                        .push(meds[layer].iter().map(|&m| m - 1).collect());
                }
            }
        }
        trace
    }
}

/// Derive a per-stream seed from a master seed (splitmix64 finalizer).
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum MoveKind {
    Birth,
    Death,
    Move,
}

/// The birth/death/move schedule: a move step on even iterations, a coin
/// flip between birth and death otherwise.
pub(crate) fn scheduled_kind(iter: u64, rng: &mut ChaCha8Rng) -> MoveKind {
    if iter % 2 == 0 {
        MoveKind::Move
    } else if rng.random::<f64>() < 0.5 {
        MoveKind::Birth
    } else {
        MoveKind::Death
    }
}

/// Log Hastings factor of a proposal kind at the current size `k` over
/// `n_pool` available objects (the move step is exactly balanced).
pub(crate) fn bdm_log_hastings(kind: MoveKind, k: usize, n_pool: usize) -> f64 {
    match kind {
        MoveKind::Move => 0.0,
        MoveKind::Birth => ((n_pool - k) as f64 / (k + 1) as f64).ln(),
        MoveKind::Death => (k as f64 / (n_pool - k + 1) as f64).ln(),
    }
}

/// Propose a new medoid set; `None` when the move is blocked at the
/// state-space boundary (K = 1 deaths, K = N births and moves).
pub(crate) fn propose_bdm(
    medoids: &MedoidSet,
    n: usize,
    kind: MoveKind,
    rng: &mut ChaCha8Rng,
) -> Option<(MedoidSet, f64)> {
    let k = medoids.k();
    let pick_non_medoid = |rng: &mut ChaCha8Rng| -> usize {
        let target = rng.random_range(0..n - k);
        let mut seen = 0;
        for j in 0..n {
            if !medoids.contains(j) {
                if seen == target {
                    return j;
                }
                seen += 1;
            }
        }
        unreachable!("non-medoid count mismatch")
    };
    match kind {
        MoveKind::Move => {
            if k == n {
                return None;
            }
            let out = medoids.indices()[rng.random_range(0..k)];
            let inn = pick_non_medoid(rng);
            let mut idx = medoids.indices().to_vec();
            idx.retain(|&m| m != out);
            idx.push(inn);
            Some((MedoidSet::new(idx, n).expect("valid"), 0.0))
        }
        MoveKind::Birth => {
            if k == n {
                return None;
            }
            let inn = pick_non_medoid(rng);
            let mut idx = medoids.indices().to_vec();
            idx.push(inn);
            Some((MedoidSet::new(idx, n).expect("valid"), bdm_log_hastings(kind, k, n)))
        }
        MoveKind::Death => {
            if k == 1 {
                return None;
            }
            let out = medoids.indices()[rng.random_range(0..k)];
            let mut idx = medoids.indices().to_vec();
            idx.retain(|&m| m != out);
            Some((MedoidSet::new(idx, n).expect("valid"), bdm_log_hastings(kind, k, n)))
        }
    }
}

/// Resolve an init strategy into a concrete medoid set.
pub(crate) fn resolve_init(
    d: &DistanceMatrix,
    init: &InitStrategy,
    rng: &mut ChaCha8Rng,
) -> MedoidSet {
    let n = d.n();
    match init {
        InitStrategy::Explicit(m) => {
            assert!(m.indices().iter().all(|&i| i < n), "explicit medoids out of range");
            m.clone()
        }
        InitStrategy::RandomK(k) => {
            let k = (*k).clamp(1, n);
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(rng);
            MedoidSet::new(idx[..k].to_vec(), n).expect("valid")
        }
        InitStrategy::FromPam => {
            let (lo, hi) = default_k_range(n);
            let k = elbow_k(d, lo, hi).unwrap_or(1).max(1);
            pam(d, k).expect("k within range").medoids
        }
    }
}

/// Resolve the init strategy into labels for the partition-based
/// samplers (the induced tessellation of the strategy's medoid set).
pub(crate) fn resolve_init_labels(
    d: &DistanceMatrix,
    init: &InitStrategy,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let medoids = resolve_init(d, init, rng);
    induce_partition(d, &medoids).labels().to_vec()
}

/// Accept/reject in log space: exp(min(0, delta)).
#[inline]
pub(crate) fn accept_log(delta: f64, rng: &mut ChaCha8Rng) -> bool {
    if delta.is_nan() {
        return false;
    }
    if delta >= 0.0 {
        return true;
    }
    rng.random::<f64>().ln() < delta
}
