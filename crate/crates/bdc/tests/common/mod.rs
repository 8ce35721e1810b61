//! Shared oracles and fixtures for the integration suites. Everything
//! here recomputes quantities by routes independent of the library code
//! under test (direct quadrature, exhaustive enumeration).

#![allow(dead_code)]

use bdc::core::{validate_distance_matrix, DistanceMatrix, MedoidSet};
use bdc::numerics::{integrate, log_gamma_fn, log_sum_exp, QuadratureSpec};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// Marginal log-likelihood of observations `xs` i.i.d. Gamma(shape, rate)
/// with rate ~ Gamma(hyper_shape, hyper_rate), by direct quadrature over
/// the rate. Oracle for the closed-form block marginal.
pub fn quadrature_block_marginal(xs: &[f64], shape: f64, hyper_shape: f64, hyper_rate: f64) -> f64 {
    let n = xs.len() as f64;
    let sum: f64 = xs.iter().sum();
    let sum_log: f64 = xs.iter().map(|x| x.ln()).sum();
    let a = n * shape + hyper_shape - 1.0; // exponent of lambda
    let b = sum + hyper_rate; // decay rate
    let constant = (shape - 1.0) * sum_log - n * log_gamma_fn(shape).unwrap()
        + hyper_shape * hyper_rate.ln()
        - log_gamma_fn(hyper_shape).unwrap();
    let peak = (a.max(1e-3)) / b;
    let g = |lam: f64| a * lam.ln() - b * lam;
    let shift = g(peak);
    let hi = (a.max(0.0) + 50.0 + 15.0 * a.max(1.0).sqrt()) / b;
    let spec = QuadratureSpec::new(400_000, 1e-12);
    let integral = integrate(
        |lam: f64| if lam <= 0.0 { 0.0 } else { (g(lam) - shift).exp() },
        0.0,
        hi,
        &spec,
    )
    .expect("oracle quadrature converges");
    integral.ln() + shift + constant
}

/// Total variation distance between an empirical distribution over keys
/// and an exact one (missing keys count as zero).
pub fn tv_distance<K: std::hash::Hash + Eq + Clone>(
    empirical: &HashMap<K, f64>,
    exact: &HashMap<K, f64>,
) -> f64 {
    let mut keys: Vec<K> = exact.keys().cloned().collect();
    for k in empirical.keys() {
        if !exact.contains_key(k) {
            keys.push(k.clone());
        }
    }
    0.5 * keys
        .iter()
        .map(|k| {
            (empirical.get(k).copied().unwrap_or(0.0) - exact.get(k).copied().unwrap_or(0.0)).abs()
        })
        .sum::<f64>()
}

/// Every medoid set over n objects as a bitmask, with its normalized
/// posterior under the supplied log score (likelihood + prior).
pub fn exact_medoid_posterior(n: usize, log_score: impl Fn(&MedoidSet) -> f64) -> HashMap<u64, f64> {
    assert!(n <= 20);
    let mut masks = Vec::new();
    let mut logs = Vec::new();
    for mask in 1u64..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|&j| mask >> j & 1 == 1).collect();
        let medoids = MedoidSet::new(idx, n).unwrap();
        masks.push(mask);
        logs.push(log_score(&medoids));
    }
    let norm = log_sum_exp(&logs);
    masks
        .into_iter()
        .zip(logs)
        .map(|(mask, lp)| (mask, (lp - norm).exp()))
        .collect()
}

pub fn medoid_mask(indices: &[usize]) -> u64 {
    indices.iter().fold(0u64, |acc, &m| acc | 1 << m)
}

/// Empirical frequencies of medoid-set draws as bitmasks.
pub fn empirical_medoid_distribution(draws: &[Vec<usize>]) -> HashMap<u64, f64> {
    let mut counts: HashMap<u64, f64> = HashMap::new();
    for m in draws {
        *counts.entry(medoid_mask(m)).or_insert(0.0) += 1.0;
    }
    let t = draws.len() as f64;
    counts.values_mut().for_each(|v| *v /= t);
    counts
}

/// All set partitions of n objects as canonical label vectors
/// (restricted growth strings).
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(labels: &mut Vec<usize>, i: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == labels.len() {
            out.push(labels.clone());
            return;
        }
        for z in 0..=max {
            labels[i] = z;
            let nmax = if z == max { max + 1 } else { max };
            rec(labels, i + 1, nmax, out);
        }
    }
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    rec(&mut labels, 1, 1, &mut out);
    if n == 1 {
        out = vec![vec![0]];
    }
    out
}

/// Canonical (first-appearance) relabeling for comparing partitions.
pub fn canonical_labels(z: &[usize]) -> Vec<usize> {
    bdc::core::Partition::from_labels(z).labels().to_vec()
}

/// Random symmetric positive distance matrix.
pub fn random_matrix(n: usize, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> DistanceMatrix {
    let mut raw = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v: f64 = rng.random_range(lo..hi);
            raw[i][j] = v;
            raw[j][i] = v;
        }
    }
    validate_distance_matrix(&raw).unwrap()
}

/// Distance matrix of 1-D points clustered at the given centers.
pub fn blob_matrix(
    centers: &[f64],
    per_blob: usize,
    spread: f64,
    rng: &mut ChaCha8Rng,
) -> (DistanceMatrix, Vec<usize>) {
    let mut pts = Vec::new();
    let mut truth = Vec::new();
    for (c, &center) in centers.iter().enumerate() {
        for _ in 0..per_blob {
            pts.push(center + rng.random_range(-spread..spread));
            truth.push(c);
        }
    }
    let n = pts.len();
    let mut raw = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (pts[i] - pts[j]).abs();
            raw[i][j] = v;
            raw[j][i] = v;
        }
    }
    (validate_distance_matrix(&raw).unwrap(), truth)
}

/// Median of a sample (the lower-middle element for even lengths).
pub fn median(xs: &[f64]) -> f64 {
    assert!(!xs.is_empty());
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v[(v.len() - 1) / 2]
}
