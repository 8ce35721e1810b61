//! Empirical-Bayes hyperparameter selection from a distance matrix.
//!
//! The procedure: pick K by the elbow of the PAM cost curve, cluster at
//! that K, split the observed distances into the member-to-medoid set
//! `a` and the inter-medoid set `b`, then set the Gamma shapes by the
//! method of moments and the rate hyperpriors by the conditional
//! posterior under an improper flat prior (unit weights).

use crate::core::DistanceMatrix;
use crate::kmedoids::{elbow_k, pam, KMedoidsError};
use crate::likelihood::{LikelihoodConfig, Mode};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum HyperError {
    #[error("distance moments are degenerate: {0}")]
    DegenerateDistances(String),
    #[error(transparent)]
    KMedoids(#[from] KMedoidsError),
    #[error("need at least 4 objects, got {0}")]
    TooFewObjects(usize),
}

/// Moment diagnostics of the two distance sets.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MomentDiagnostics {
    pub a_mean: f64,
    pub a_var: f64,
    pub b_mean: f64,
    pub b_var: f64,
}

/// Outcome of the selection procedure.
#[derive(Debug, Clone)]
pub struct HyperSelection {
    pub cfg: LikelihoodConfig,
    pub k_elbow: usize,
    pub a_set_size: usize,
    pub b_set_size: usize,
    pub diagnostics: MomentDiagnostics,
}

/// shapes are clamped into the ranges the likelihood requires
const DELTA1_MAX: f64 = 1.0 - 1e-6;
const DELTA2_MIN: f64 = 1.0 + 1e-6;
const VARIANCE_FLOOR: f64 = 1e-12;

fn mean_and_var(xs: &[f64]) -> Option<(f64, f64)> {
    if xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Some((mean, var))
}

/// Select likelihood hyperparameters from the distance matrix; the
/// returned config defaults to the linear mode with repulsion and can be
/// re-flagged with [`LikelihoodConfig::with_mode`] /
/// [`LikelihoodConfig::with_repulsion`].
pub fn select_hyperparameters(
    d: &DistanceMatrix,
    k_range: (usize, usize),
) -> Result<HyperSelection, HyperError> {
    let n = d.n();
    if n < 4 {
        return Err(HyperError::TooFewObjects(n));
    }
    let k_elbow = elbow_k(d, k_range.0, k_range.1)?;
    let fit = pam(d, k_elbow)?;
    let mut a_set = Vec::new();
    for (pos, &m) in fit.medoids.indices().iter().enumerate() {
        for &j in fit.labels.cluster(pos) {
            if j != m {
                a_set.push(d.get(m, j));
            }
        }
    }
    let idx = fit.medoids.indices();
    let mut b_set = Vec::new();
    for i in 0..idx.len() {
        for j in (i + 1)..idx.len() {
            b_set.push(d.get(idx[i], idx[j]));
        }
    }
    let (a_mean, a_var) = mean_and_var(&a_set).ok_or_else(|| {
        HyperError::DegenerateDistances(format!("member set has {} values", a_set.len()))
    })?;
    let (b_mean, b_var) = mean_and_var(&b_set).ok_or_else(|| {
        HyperError::DegenerateDistances(format!("inter-medoid set has {} values", b_set.len()))
    })?;
    if a_var < VARIANCE_FLOOR {
        return Err(HyperError::DegenerateDistances("member distances have zero variance".into()));
    }
    if b_var < VARIANCE_FLOOR {
        return Err(HyperError::DegenerateDistances(
            "inter-medoid distances have zero variance".into(),
        ));
    }
    let delta1 = (a_mean * a_mean / a_var).min(DELTA1_MAX);
    let delta2 = (b_mean * b_mean / b_var).max(DELTA2_MIN);
    let mu = delta1 * a_set.len() as f64;
    let beta: f64 = a_set.iter().sum();
    let theta_rate = b_mean / b_var;
    // quadratic-mode repulsion hyperprior mirrors the same posterior
    // logic on the b set
    let zeta = delta2 * b_set.len() as f64;
    let gamma_rate: f64 = b_set.iter().sum();
    let cfg = LikelihoodConfig::new(
        delta1,
        delta2,
        mu,
        beta,
        zeta,
        gamma_rate,
        theta_rate,
        Mode::Linear,
        true,
    )
    .map_err(|e| HyperError::DegenerateDistances(e.to_string()))?;
    Ok(HyperSelection {
        cfg,
        k_elbow,
        a_set_size: a_set.len(),
        b_set_size: b_set.len(),
        diagnostics: MomentDiagnostics { a_mean, a_var, b_mean, b_var },
    })
}

/// Result of the singleton prefilter.
#[derive(Debug, Clone)]
pub struct PrefilterResult {
    /// objects kept for clustering, in original order
    pub kept: Vec<usize>,
    /// objects flagged as singletons
    pub singletons: Vec<usize>,
    /// distance matrix restricted to the kept objects
    pub restricted: DistanceMatrix,
}

/// Flag object i as a singleton when the empirical q-quantile of its
/// distances to all other objects exceeds `threshold`. The quantile is
/// the nearest-rank order statistic.
pub fn singleton_prefilter(d: &DistanceMatrix, q: f64, threshold: f64) -> PrefilterResult {
    assert!(q > 0.0 && q < 1.0, "quantile level must lie in (0,1)");
    let n = d.n();
    let mut kept = Vec::new();
    let mut singletons = Vec::new();
    for i in 0..n {
        let mut others: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| d.get(i, j)).collect();
        if others.is_empty() {
            kept.push(i);
            continue;
        }
        others.sort_by(f64::total_cmp);
        let rank = ((q * others.len() as f64).ceil() as usize).clamp(1, others.len());
        let quantile = others[rank - 1];
        if quantile > threshold {
            singletons.push(i);
        } else {
            kept.push(i);
        }
    }
    let restricted = d.restrict(&kept);
    PrefilterResult { kept, singletons, restricted }
}
