//! Distance-matrix log-likelihoods.
//!
//! Two marginal forms, both with the rate parameters integrated out
//! against their conjugate Gamma hyperpriors:
//!
//! - quadratic: every within-cluster pair contributes a cohesion term
//!   and (optionally) every between-cluster pair a repulsion term;
//! - linear: only medoid-to-member distances contribute cohesion and
//!   only inter-medoid distances contribute repulsion, so one
//!   evaluation costs O(N + K^2).
//!
//! All arithmetic stays in log space.

use crate::core::{DistanceMatrix, MedoidSet, Partition};
use crate::numerics::{log_gamma_density, log_gamma_fn};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LikelihoodError {
    #[error("invalid likelihood config: {0}")]
    InvalidConfig(String),
    #[error("partition is not induced by the medoid set: {0}")]
    InconsistentPartition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Mode {
    Quadratic,
    Linear,
}

/// Hyperparameters of the Gamma cohesion/repulsion likelihood.
///
/// `delta1` is the within shape (< 1 so the density decreases in the
/// distance), `delta2` the between shape (> 1 so small separations are
/// penalized). `(mu, beta)` is the hyperprior on the cohesion rate,
/// `(zeta, gamma_rate)` the hyperprior on the quadratic-mode repulsion
/// rate, and `theta_rate` the fixed repulsion rate of the linear mode.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LikelihoodConfig {
    pub delta1: f64,
    pub delta2: f64,
    pub mu: f64,
    pub beta: f64,
    pub zeta: f64,
    pub gamma_rate: f64,
    pub theta_rate: f64,
    pub mode: Mode,
    pub repulsion: bool,
}

impl LikelihoodConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        delta1: f64,
        delta2: f64,
        mu: f64,
        beta: f64,
        zeta: f64,
        gamma_rate: f64,
        theta_rate: f64,
        mode: Mode,
        repulsion: bool,
    ) -> Result<LikelihoodConfig, LikelihoodError> {
        let cfg = LikelihoodConfig {
            delta1,
            delta2,
            mu,
            beta,
            zeta,
            gamma_rate,
            theta_rate,
            mode,
            repulsion,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), LikelihoodError> {
        if !(self.delta1 > 0.0 && self.delta1 < 1.0) {
            return Err(LikelihoodError::InvalidConfig(format!(
                "delta1 must lie in (0,1), got {}",
                self.delta1
            )));
        }
        if !(self.delta2 > 1.0) {
            return Err(LikelihoodError::InvalidConfig(format!(
                "delta2 must exceed 1, got {}",
                self.delta2
            )));
        }
        for (name, v) in [
            ("mu", self.mu),
            ("beta", self.beta),
            ("zeta", self.zeta),
            ("gamma_rate", self.gamma_rate),
            ("theta_rate", self.theta_rate),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(LikelihoodError::InvalidConfig(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn with_mode(mut self, mode: Mode) -> LikelihoodConfig {
        self.mode = mode;
        self
    }

    pub fn with_repulsion(mut self, repulsion: bool) -> LikelihoodConfig {
        self.repulsion = repulsion;
        self
    }
}

/// Marginal log-likelihood of `n` i.i.d. Gamma(shape, rate) observations
/// with the rate integrated against Gamma(hyper_shape, hyper_rate);
/// `sum_log` and `sum` are the sufficient statistics of the block.
/// Exactly zero for an empty block.
#[inline]
pub fn log_marginal_gamma_block(
    n: usize,
    sum_log: f64,
    sum: f64,
    shape: f64,
    hyper_shape: f64,
    hyper_rate: f64,
) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let lg = |v: f64| log_gamma_fn(v).expect("positive argument");
    lg(hyper_shape + nf * shape) - lg(hyper_shape) - nf * lg(shape)
        + hyper_shape * hyper_rate.ln()
        + (shape - 1.0) * sum_log
        - (hyper_shape + nf * shape) * (hyper_rate + sum).ln()
}

/// Quadratic marginal log-likelihood of a partition: all within-cluster
/// pairs (cohesion) and, when enabled, all between-cluster pairs
/// (repulsion). O(N^2).
pub fn loglik_quadratic(
    d: &DistanceMatrix,
    t: &Partition,
    cfg: &LikelihoodConfig,
) -> Result<f64, LikelihoodError> {
    if cfg.mode != Mode::Quadratic {
        return Err(LikelihoodError::InvalidConfig(
            "loglik_quadratic requires quadratic mode".into(),
        ));
    }
    Ok(loglik_quadratic_unchecked(d, t, cfg))
}

pub(crate) fn loglik_quadratic_unchecked(
    d: &DistanceMatrix,
    t: &Partition,
    cfg: &LikelihoodConfig,
) -> f64 {
    let n = d.n();
    let k = t.k();
    let mut within = vec![(0usize, 0.0f64, 0.0f64); k];
    // between-block sufficient statistics, upper triangular (a < b)
    let mut between = if cfg.repulsion { vec![(0usize, 0.0f64, 0.0f64); k * k] } else { Vec::new() };
    for i in 0..n {
        let zi = t.label(i);
        for j in (i + 1)..n {
            let zj = t.label(j);
            let x = d.get_clamped(i, j);
            if zi == zj {
                let w = &mut within[zi];
                w.0 += 1;
                w.1 += x.ln();
                w.2 += x;
            } else if cfg.repulsion {
                let (a, b) = if zi < zj { (zi, zj) } else { (zj, zi) };
                let e = &mut between[a * k + b];
                e.0 += 1;
                e.1 += x.ln();
                e.2 += x;
            }
        }
    }
    let mut total = 0.0;
    for &(np, slog, ssum) in &within {
        total += log_marginal_gamma_block(np, slog, ssum, cfg.delta1, cfg.mu, cfg.beta);
    }
    if cfg.repulsion {
        for a in 0..k {
            for b in (a + 1)..k {
                let (np, slog, ssum) = between[a * k + b];
                total +=
                    log_marginal_gamma_block(np, slog, ssum, cfg.delta2, cfg.zeta, cfg.gamma_rate);
            }
        }
    }
    total
}

/// Linear marginal log-likelihood: cohesion over medoid-to-member
/// distances, repulsion as fixed-rate Gamma densities on the inter-medoid
/// distances. O(N + K^2).
///
/// `t` must assign each medoid to its own cluster id (the structural
/// signature of a tessellation-induced partition, single-layer or
/// nested).
pub fn loglik_linear(
    d: &DistanceMatrix,
    medoids: &MedoidSet,
    t: &Partition,
    cfg: &LikelihoodConfig,
) -> Result<f64, LikelihoodError> {
    if cfg.mode != Mode::Linear {
        return Err(LikelihoodError::InvalidConfig(
            "loglik_linear requires linear mode".into(),
        ));
    }
    if t.k() != medoids.k() {
        return Err(LikelihoodError::InconsistentPartition(format!(
            "{} clusters vs {} medoids",
            t.k(),
            medoids.k()
        )));
    }
    for (pos, &m) in medoids.indices().iter().enumerate() {
        if t.label(m) != pos {
            return Err(LikelihoodError::InconsistentPartition(format!(
                "medoid {m} carries label {} instead of {pos}",
                t.label(m)
            )));
        }
    }
    Ok(loglik_linear_unchecked(d, medoids, t, cfg))
}

pub(crate) fn loglik_linear_unchecked(
    d: &DistanceMatrix,
    medoids: &MedoidSet,
    t: &Partition,
    cfg: &LikelihoodConfig,
) -> f64 {
    let mut total = 0.0;
    for (pos, &m) in medoids.indices().iter().enumerate() {
        let mut np = 0usize;
        let mut slog = 0.0;
        let mut ssum = 0.0;
        for &j in t.cluster(pos) {
            if j == m {
                continue;
            }
            let x = d.get_clamped(m, j);
            np += 1;
            slog += x.ln();
            ssum += x;
        }
        total += log_marginal_gamma_block(np, slog, ssum, cfg.delta1, cfg.mu, cfg.beta);
    }
    if cfg.repulsion {
        let idx = medoids.indices();
        for a in 0..idx.len() {
            for b in (a + 1)..idx.len() {
                let x = d.get_clamped(idx[a], idx[b]);
                total += log_gamma_density(x, cfg.delta2, cfg.theta_rate)
                    .expect("clamped distance is positive");
            }
        }
    }
    total
}

/// Induce the tessellation of `medoids` and evaluate the configured
/// likelihood on it.
pub fn loglik(
    d: &DistanceMatrix,
    medoids: &MedoidSet,
    cfg: &LikelihoodConfig,
) -> Result<f64, LikelihoodError> {
    let t = crate::core::induce_partition(d, medoids);
    match cfg.mode {
        Mode::Quadratic => loglik_quadratic(d, &t, cfg),
        Mode::Linear => loglik_linear(d, medoids, &t, cfg),
    }
}

/// Incremental sufficient statistics for the quadratic likelihood under
/// single-object moves; the fast path for label-based Gibbs sweeps.
///
/// Correctness is defined by [`loglik_quadratic`]: the cache must agree
/// with a pure recompute of the partition it currently represents.
#[derive(Debug, Clone)]
pub struct QuadStats<'a> {
    d: &'a DistanceMatrix,
    cfg: LikelihoodConfig,
    labels: Vec<Option<usize>>,
    sizes: Vec<usize>,
    within: Vec<(f64, f64)>,
    between: Vec<(f64, f64)>, // k x k, used at (min,max)
}

impl<'a> QuadStats<'a> {
    pub fn new(d: &'a DistanceMatrix, labels: &[usize], cfg: &LikelihoodConfig) -> QuadStats<'a> {
        let mut s = QuadStats {
            d,
            cfg: *cfg,
            labels: vec![None; d.n()],
            sizes: Vec::new(),
            within: Vec::new(),
            between: Vec::new(),
        };
        // insert in cluster order so ids stay dense by first appearance
        let canonical = Partition::from_labels(labels);
        for (j, &z) in canonical.labels().iter().enumerate() {
            let c = z.min(s.sizes.len());
            debug_assert!(z <= s.sizes.len());
            s.insert(j, c);
        }
        s
    }

    pub fn n_clusters(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn labels(&self) -> Vec<usize> {
        self.labels.iter().map(|z| z.expect("fully assigned")).collect()
    }

    pub fn label_of(&self, j: usize) -> Option<usize> {
        self.labels[j]
    }

    fn block_mut(&mut self, a: usize, b: usize) -> &mut (f64, f64) {
        let k = self.sizes.len();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        &mut self.between[lo * k + hi]
    }

    /// Remove object `j` from its cluster. An emptied cluster is
    /// compacted away by renaming the last cluster to its id.
    pub fn remove(&mut self, j: usize) {
        let c = self.labels[j].expect("object must be assigned");
        self.labels[j] = None;
        for i in 0..self.d.n() {
            let Some(zi) = self.labels[i] else { continue };
            let x = self.d.get_clamped(i, j);
            if zi == c {
                self.within[c].0 -= x.ln();
                self.within[c].1 -= x;
            } else {
                let e = self.block_mut(zi, c);
                e.0 -= x.ln();
                e.1 -= x;
            }
        }
        self.sizes[c] -= 1;
        if self.sizes[c] == 0 {
            self.drop_cluster(c);
        }
    }

    fn drop_cluster(&mut self, c: usize) {
        let k = self.sizes.len();
        let last = k - 1;
        if c != last {
            for z in self.labels.iter_mut().flatten() {
                if *z == last {
                    *z = c;
                }
            }
            self.sizes[c] = self.sizes[last];
            self.within[c] = self.within[last];
            for t in 0..last {
                if t != c {
                    let (lo, hi) = if t < last { (t, last) } else { (last, t) };
                    let v = self.between[lo * k + hi];
                    let (lo2, hi2) = if t < c { (t, c) } else { (c, t) };
                    self.between[lo2 * k + hi2] = v;
                }
            }
        }
        let nk = k - 1;
        let mut nb = vec![(0.0, 0.0); nk * nk];
        for a in 0..nk {
            for b in (a + 1)..nk {
                nb[a * nk + b] = self.between[a * k + b];
            }
        }
        self.between = nb;
        self.sizes.truncate(nk);
        self.within.truncate(nk);
    }

    /// Insert object `j` into cluster `c`; `c == n_clusters()` opens a
    /// new cluster.
    pub fn insert(&mut self, j: usize, c: usize) {
        let k = self.sizes.len();
        if c == k {
            self.sizes.push(0);
            self.within.push((0.0, 0.0));
            let nk = k + 1;
            let mut nb = vec![(0.0, 0.0); nk * nk];
            for a in 0..k {
                for b in (a + 1)..k {
                    nb[a * nk + b] = self.between[a * k + b];
                }
            }
            self.between = nb;
        } else {
            assert!(c < k, "cluster id {c} out of range");
        }
        for i in 0..self.d.n() {
            let Some(zi) = self.labels[i] else { continue };
            let x = self.d.get_clamped(i, j);
            if zi == c {
                self.within[c].0 += x.ln();
                self.within[c].1 += x;
            } else {
                let e = self.block_mut(zi, c);
                e.0 += x.ln();
                e.1 += x;
            }
        }
        self.labels[j] = Some(c);
        self.sizes[c] += 1;
    }

    /// Total quadratic log-likelihood of the current assignment.
    pub fn loglik(&self) -> f64 {
        let k = self.sizes.len();
        let mut total = 0.0;
        for c in 0..k {
            let np = self.sizes[c] * (self.sizes[c].max(1) - 1) / 2;
            total += log_marginal_gamma_block(
                np,
                self.within[c].0,
                self.within[c].1,
                self.cfg.delta1,
                self.cfg.mu,
                self.cfg.beta,
            );
        }
        if self.cfg.repulsion {
            for a in 0..k {
                for b in (a + 1)..k {
                    let (slog, ssum) = self.between[a * k + b];
                    total += log_marginal_gamma_block(
                        self.sizes[a] * self.sizes[b],
                        slog,
                        ssum,
                        self.cfg.delta2,
                        self.cfg.zeta,
                        self.cfg.gamma_rate,
                    );
                }
            }
        }
        total
    }

    /// Log-likelihood deltas of inserting the held-out object `j` into
    /// each existing cluster (entries `0..k`) or a new one (last entry).
    /// `j` must have been removed first.
    pub fn insertion_logliks(&self, j: usize) -> Vec<f64> {
        assert!(self.labels[j].is_none(), "object must be held out");
        let k = self.sizes.len();
        let mut slog_to = vec![0.0f64; k];
        let mut ssum_to = vec![0.0f64; k];
        for i in 0..self.d.n() {
            let Some(zi) = self.labels[i] else { continue };
            let x = self.d.get_clamped(i, j);
            slog_to[zi] += x.ln();
            ssum_to[zi] += x;
        }
        let within_block = |np: usize, slog: f64, ssum: f64| {
            log_marginal_gamma_block(np, slog, ssum, self.cfg.delta1, self.cfg.mu, self.cfg.beta)
        };
        let between_block = |np: usize, slog: f64, ssum: f64| {
            log_marginal_gamma_block(np, slog, ssum, self.cfg.delta2, self.cfg.zeta, self.cfg.gamma_rate)
        };
        let mut out = Vec::with_capacity(k + 1);
        for c in 0..=k {
            let mut delta = 0.0;
            for t in 0..k {
                let size_t = self.sizes[t];
                if t == c {
                    // j joins cluster t: the within block gains size_t pairs
                    let np_old = size_t * (size_t - 1) / 2;
                    let (w0, w1) = self.within[t];
                    delta += within_block(np_old + size_t, w0 + slog_to[t], w1 + ssum_to[t])
                        - within_block(np_old, w0, w1);
                } else if self.cfg.repulsion {
                    // the (c,t) between block gains size_t pairs
                    let (b0, b1) = if c < k {
                        let (lo, hi) = if c < t { (c, t) } else { (t, c) };
                        self.between[lo * k + hi]
                    } else {
                        (0.0, 0.0)
                    };
                    let np_old = if c < k { self.sizes[c] * size_t } else { 0 };
                    delta += between_block(np_old + size_t, b0 + slog_to[t], b1 + ssum_to[t])
                        - between_block(np_old, b0, b1);
                }
            }
            out.push(delta);
        }
        out
    }
}
