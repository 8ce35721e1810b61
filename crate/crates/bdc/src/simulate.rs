//! Synthetic two-layer data generator and distance-pipeline utilities.
//!
//! Objects are drawn from a mixture of Gaussians whose centers sit at
//! the vertices of the standard simplex (the unit basis vectors), with
//! per-layer label vectors whose agreement is controlled by `alpha_s`:
//! a fraction copies the layer-1 labels, the rest receive a uniform
//! random permutation of the remaining layer-1 labels, so the label
//! composition is identical across layers.

use crate::core::{validate_distance_matrix, DistanceMatrix, MatrixError};
use crate::numerics::{gamma_quantile, normal_cdf};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Gamma, StandardNormal};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimulateError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("off-diagonal distances have zero spread")]
    DegenerateDistances,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SimConfig {
    pub n: usize,
    pub n_clusters: usize,
    pub dim: usize,
    /// within-cluster standard deviation: larger means more overlap
    pub sigma_s: f64,
    /// fraction of objects whose layer-2 label copies layer 1
    pub alpha_s: f64,
    /// total Dirichlet mass over the cluster weights
    pub dirichlet_m: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n: 100,
            n_clusters: 10,
            dim: 10,
            sigma_s: 0.1,
            alpha_s: 0.5,
            dirichlet_m: 10.0,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimulateError> {
        if self.n < self.n_clusters || self.n_clusters == 0 {
            return Err(SimulateError::InvalidConfig(format!(
                "need n >= n_clusters >= 1, got n={} k={}",
                self.n, self.n_clusters
            )));
        }
        if !(self.sigma_s > 0.0) {
            return Err(SimulateError::InvalidConfig(format!(
                "sigma_s must be positive, got {}",
                self.sigma_s
            )));
        }
        if !(0.0..=1.0).contains(&self.alpha_s) {
            return Err(SimulateError::InvalidConfig(format!(
                "alpha_s must lie in [0,1], got {}",
                self.alpha_s
            )));
        }
        if self.n_clusters > self.dim {
            return Err(SimulateError::InvalidConfig(format!(
                "simplex centers need dim >= n_clusters, got dim={} k={}",
                self.dim, self.n_clusters
            )));
        }
        if !(self.dirichlet_m > 0.0) {
            return Err(SimulateError::InvalidConfig("dirichlet_m must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SimOutput {
    pub x1: Vec<Vec<f64>>,
    pub x2: Vec<Vec<f64>>,
    pub z1_true: Vec<usize>,
    pub z2_true: Vec<usize>,
    pub d1: DistanceMatrix,
    pub d2: DistanceMatrix,
}

/// The k vertices of the standard simplex in `dim` dimensions: the unit
/// basis vectors, pairwise sqrt(2) apart.
pub fn centers_standard_simplex(k: usize, dim: usize) -> Vec<Vec<f64>> {
    assert!(k <= dim, "need dim >= k for basis-vector centers");
    (0..k)
        .map(|i| {
            let mut v = vec![0.0; dim];
            v[i] = 1.0;
            v
        })
        .collect()
}

/// Euclidean distance matrix of a point set.
pub fn euclidean_distance_matrix(x: &[Vec<f64>]) -> Result<DistanceMatrix, MatrixError> {
    let n = x.len();
    let mut raw = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = x[i]
                .iter()
                .zip(x[j].iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            raw[i][j] = v;
            raw[j][i] = v;
        }
    }
    validate_distance_matrix(&raw)
}

fn draw_labels(
    weights: &[f64],
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let total: f64 = weights.iter().sum();
    (0..n)
        .map(|_| {
            let mut u = rng.random_range(0.0..total);
            for (c, &w) in weights.iter().enumerate() {
                u -= w;
                if u <= 0.0 {
                    return c;
                }
            }
            weights.len() - 1
        })
        .collect()
}

fn draw_points(
    labels: &[usize],
    centers: &[Vec<f64>],
    sigma: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<f64>> {
    labels
        .iter()
        .map(|&z| {
            centers[z]
                .iter()
                .map(|&c| c + sigma * rng.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect()
}

/// Generate one two-layer replicate.
pub fn simulate_two_layer(cfg: &SimConfig) -> Result<SimOutput, SimulateError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let centers = centers_standard_simplex(cfg.n_clusters, cfg.dim);
    // symmetric Dirichlet with total mass dirichlet_m
    let conc = cfg.dirichlet_m / cfg.n_clusters as f64;
    let gamma = Gamma::new(conc, 1.0).expect("positive shape");
    let weights: Vec<f64> = (0..cfg.n_clusters).map(|_| rng.sample(gamma).max(1e-300)).collect();
    let z1 = draw_labels(&weights, cfg.n, &mut rng);
    let x1 = draw_points(&z1, &centers, cfg.sigma_s, &mut rng);

    // layer 2 labels: a random subset of floor(n * alpha_s) objects keeps
    // the layer-1 label; the rest get a uniform permutation of their own
    // layer-1 labels
    let n_copy = (cfg.n as f64 * cfg.alpha_s).floor() as usize;
    let mut order: Vec<usize> = (0..cfg.n).collect();
    order.shuffle(&mut rng);
    let copied = &order[..n_copy];
    let free = &order[n_copy..];
    let mut z2 = vec![usize::MAX; cfg.n];
    for &i in copied {
        z2[i] = z1[i];
    }
    let mut pool: Vec<usize> = free.iter().map(|&i| z1[i]).collect();
    pool.shuffle(&mut rng);
    for (&i, &z) in free.iter().zip(pool.iter()) {
        z2[i] = z;
    }
    let x2 = draw_points(&z2, &centers, cfg.sigma_s, &mut rng);
    let d1 = euclidean_distance_matrix(&x1)?;
    let d2 = euclidean_distance_matrix(&x2)?;
    Ok(SimOutput { x1, x2, z1_true: z1, z2_true: z2, d1, d2 })
}

/// Standardize the off-diagonal entries, push them through the standard
/// normal CDF, then through the Gamma(shape, rate) quantile so the
/// distance histogram resembles a Gamma sample. Monotone, symmetric,
/// zero diagonal.
pub fn gamma_quantile_transform(
    d: &DistanceMatrix,
    shape: f64,
    rate: f64,
) -> Result<DistanceMatrix, SimulateError> {
    let n = d.n();
    let mut off = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            off.push(d.get(i, j));
        }
    }
    if off.len() < 2 {
        return Err(SimulateError::DegenerateDistances);
    }
    let m = off.iter().sum::<f64>() / off.len() as f64;
    let var = off.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (off.len() as f64 - 1.0);
    if var < 1e-300 {
        return Err(SimulateError::DegenerateDistances);
    }
    let sd = var.sqrt();
    let mut raw = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let z = (d.get(i, j) - m) / sd;
            // keep the probability strictly inside (0,1)
            let p = normal_cdf(z).clamp(1e-300, 1.0 - 1e-16);
            let v = gamma_quantile(p, shape, rate).expect("p in (0,1)");
            raw[i][j] = v;
            raw[j][i] = v;
        }
    }
    Ok(validate_distance_matrix(&raw)?)
}
