//! Log-priors: the medoid-set prior, the Pitman-Yor EPPF, and the
//! marginalized partition-dependence penalty with its Beta-prior
//! machinery for the dependence parameter.

use crate::core::{MedoidSet, Partition};
use crate::numerics::{log_beta, log_gamma_fn, log_tricomi_u, QuadratureSpec};
use crate::posterior::rand_index;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PriorsError {
    #[error("distance must be nonnegative and not NaN, got {0}")]
    NonFiniteDistance(f64),
    #[error("invalid prior config: {0}")]
    InvalidConfig(String),
}

/// Truncated-geometric prior on the number of medoids, uniform over the
/// medoid sets of each size.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MedoidPriorConfig {
    /// success parameter of the truncated geometric, in (0,1)
    pub p: f64,
    /// total number of objects
    pub n: usize,
}

impl MedoidPriorConfig {
    pub fn new(p: f64, n: usize) -> Result<MedoidPriorConfig, PriorsError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(PriorsError::InvalidConfig(format!("p must lie in (0,1), got {p}")));
        }
        if n == 0 {
            return Err(PriorsError::InvalidConfig("n must be positive".into()));
        }
        Ok(MedoidPriorConfig { p, n })
    }
}

fn log_binomial(n: usize, k: usize) -> f64 {
    let lg = |v: usize| log_gamma_fn(v as f64 + 1.0).expect("positive");
    lg(n) - lg(k) - lg(n - k)
}

/// Log pmf of the truncated geometric on {1, ..., n}.
pub fn log_truncated_geometric(k: usize, p: f64, n: usize) -> f64 {
    debug_assert!(k >= 1 && k <= n);
    let log_q = (1.0 - p).ln();
    // normalizer: sum_{j=1..n} p (1-p)^{j-1} = 1 - (1-p)^n
    let log_norm = (-((n as f64) * log_q).exp()).ln_1p();
    p.ln() + (k as f64 - 1.0) * log_q - log_norm
}

/// Log prior of a medoid set of size K: uniform over the C(n,K) sets of
/// that size times the truncated-geometric pmf of K.
pub fn log_medoid_prior_k(k: usize, cfg: &MedoidPriorConfig) -> f64 {
    debug_assert!(k >= 1 && k <= cfg.n);
    -log_binomial(cfg.n, k) + log_truncated_geometric(k, cfg.p, cfg.n)
}

pub fn log_medoid_prior(medoids: &MedoidSet, cfg: &MedoidPriorConfig) -> f64 {
    log_medoid_prior_k(medoids.k(), cfg)
}

/// Pitman-Yor parameters: concentration `m` and one discount used in
/// both rising-factorial terms of the EPPF; discount 0 recovers the
/// Dirichlet process.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PYConfig {
    pub m: f64,
    pub discount: f64,
}

impl PYConfig {
    pub fn new(m: f64, discount: f64) -> Result<PYConfig, PriorsError> {
        if !(m > 0.0) {
            return Err(PriorsError::InvalidConfig(format!(
                "concentration must be positive, got {m}"
            )));
        }
        if !(0.0..1.0).contains(&discount) {
            return Err(PriorsError::InvalidConfig(format!(
                "discount must lie in [0,1), got {discount}"
            )));
        }
        Ok(PYConfig { m, discount })
    }
}

/// log of the rising factorial [x]_{m;a} = x (x+a) ... (x+(m-1)a).
fn log_rising(x: f64, m: usize, a: f64) -> f64 {
    (0..m).map(|j| (x + j as f64 * a).ln()).sum()
}

/// Log EPPF of the Pitman-Yor process for the given block sizes.
/// The empty partition (no sizes) has probability 1.
pub fn log_py_eppf(sizes: &[usize], cfg: &PYConfig) -> f64 {
    if sizes.is_empty() {
        return 0.0;
    }
    let k = sizes.len();
    let n: usize = sizes.iter().sum();
    let s = cfg.discount;
    let mut lp = log_rising(cfg.m + s, k - 1, s) - log_rising(cfg.m + 1.0, n - 1, 1.0);
    for &ni in sizes {
        lp += log_rising(1.0 - s, ni - 1, 1.0);
    }
    lp
}

/// Beta prior on the dependence parameter of the joint model.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AlphaPriorConfig {
    pub a: f64,
    pub b: f64,
}

impl AlphaPriorConfig {
    pub fn new(a: f64, b: f64) -> Result<AlphaPriorConfig, PriorsError> {
        if !(a > 0.0) || !(b > 0.0) {
            return Err(PriorsError::InvalidConfig(format!(
                "Beta parameters must be positive, got ({a}, {b})"
            )));
        }
        Ok(AlphaPriorConfig { a, b })
    }
}

/// Distance between partitions used by the joint model: 1/RI - 1, with
/// +inf when the Rand index is zero.
pub fn partition_distance(t1: &Partition, t2: &Partition) -> f64 {
    let ri = rand_index(t1.labels(), t2.labels()).expect("same length");
    if ri <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / ri - 1.0
    }
}

/// ln of the marginalized penalty C(d) = E_alpha[exp(-phi(alpha) d)]
/// under alpha ~ Beta(a,b) with phi(alpha) = alpha/(1-alpha):
/// ln C = ln Gamma(a) + ln U(a, 1-b, d) - ln B(a,b). Exactly 0 at d = 0;
/// -inf at d = +inf (total partition disagreement).
pub fn log_penalty_c(d: f64, cfg: &AlphaPriorConfig) -> Result<f64, PriorsError> {
    if d.is_nan() || d < 0.0 {
        return Err(PriorsError::NonFiniteDistance(d));
    }
    if d == 0.0 {
        return Ok(0.0);
    }
    if d.is_infinite() {
        return Ok(f64::NEG_INFINITY);
    }
    let spec = QuadratureSpec::default();
    let lu = log_tricomi_u(cfg.a, 1.0 - cfg.b, d, &spec)
        .map_err(|e| PriorsError::InvalidConfig(format!("penalty quadrature failed: {e}")))?;
    let lg_a = log_gamma_fn(cfg.a).expect("a > 0");
    let lb = log_beta(cfg.a, cfg.b).expect("positive");
    Ok(lg_a + lu - lb)
}

/// Gridded inverse-CDF sampler for the alpha posterior
/// pi(alpha | d) proportional to exp(-phi(alpha) d) alpha^{a-1} (1-alpha)^{b-1}.
///
/// The grid is cosine-spaced (2048 cells, dense near both endpoints);
/// cell masses come from the midpoint rule, so endpoint singularities
/// for a < 1 or b < 1 are never evaluated directly.
#[derive(Debug, Clone)]
pub struct AlphaPosteriorSampler {
    edges: Vec<f64>,
    cdf: Vec<f64>,
}

const ALPHA_GRID_CELLS: usize = 2048;

impl AlphaPosteriorSampler {
    pub fn new(d: f64, cfg: &AlphaPriorConfig) -> AlphaPosteriorSampler {
        assert!(d.is_finite() && d >= 0.0, "distance must be finite and nonnegative");
        let m = ALPHA_GRID_CELLS;
        let mut edges = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let u = j as f64 / m as f64;
            edges.push(0.5 * (1.0 - (std::f64::consts::PI * u).cos()));
        }
        let log_density = |alpha: f64| -> f64 {
            (cfg.a - 1.0) * alpha.ln() + (cfg.b - 1.0) * (1.0 - alpha).ln()
                - d * alpha / (1.0 - alpha)
        };
        let mut log_mass = Vec::with_capacity(m);
        let mut max_lm = f64::NEG_INFINITY;
        for j in 0..m {
            let mid = 0.5 * (edges[j] + edges[j + 1]);
            let width = edges[j + 1] - edges[j];
            let lm = log_density(mid) + width.ln();
            max_lm = max_lm.max(lm);
            log_mass.push(lm);
        }
        let mut cdf = Vec::with_capacity(m + 1);
        cdf.push(0.0);
        let mut acc = 0.0;
        for lm in &log_mass {
            acc += (lm - max_lm).exp();
            cdf.push(acc);
        }
        let total = acc;
        for c in cdf.iter_mut() {
            *c /= total;
        }
        AlphaPosteriorSampler { edges, cdf }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let cell = match self.cdf.binary_search_by(|c| c.total_cmp(&u)) {
            Ok(i) => i.min(self.cdf.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.cdf.len() - 2),
        };
        let c0 = self.cdf[cell];
        let c1 = self.cdf[cell + 1];
        let frac = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        self.edges[cell] + frac * (self.edges[cell + 1] - self.edges[cell])
    }
}

/// One draw from the alpha posterior at partition distance `d`.
pub fn sample_alpha_posterior<R: Rng + ?Sized>(
    d: f64,
    cfg: &AlphaPriorConfig,
    rng: &mut R,
) -> f64 {
    AlphaPosteriorSampler::new(d, cfg).sample(rng)
}
