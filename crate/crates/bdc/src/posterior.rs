//! Posterior summarization: co-clustering matrices, point estimates,
//! cluster-count posteriors, and partition agreement metrics.

use std::collections::HashMap;
use thiserror::Error;

use crate::core::Partition;

#[derive(Debug, Error, PartialEq)]
pub enum PosteriorError {
    #[error("trace contains no retained draws")]
    EmptyTrace,
    #[error("label vectors have different lengths: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },
}

/// Estimated pairwise co-clustering probabilities; exactly symmetric
/// with unit diagonal.
#[derive(Debug, Clone)]
pub struct CoClusteringMatrix {
    n: usize,
    s: Vec<f64>,
}

impl CoClusteringMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.s[i * self.n + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.s
    }
}

/// Fraction of draws in which each pair of objects shares a cluster.
pub fn coclustering(draws: &[Vec<usize>]) -> Result<CoClusteringMatrix, PosteriorError> {
    if draws.is_empty() {
        return Err(PosteriorError::EmptyTrace);
    }
    let n = draws[0].len();
    let mut counts = vec![0u64; n * n];
    for z in draws {
        assert_eq!(z.len(), n, "ragged trace");
        for i in 0..n {
            for j in (i + 1)..n {
                if z[i] == z[j] {
                    counts[i * n + j] += 1;
                }
            }
        }
    }
    let t = draws.len() as f64;
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        s[i * n + i] = 1.0;
        for j in (i + 1)..n {
            let v = counts[i * n + j] as f64 / t;
            s[i * n + j] = v;
            s[j * n + i] = v;
        }
    }
    Ok(CoClusteringMatrix { n, s })
}

fn check_len(a: &[usize], b: &[usize]) -> Result<(), PosteriorError> {
    if a.len() != b.len() {
        return Err(PosteriorError::LengthMismatch { a: a.len(), b: b.len() });
    }
    Ok(())
}

fn contingency(a: &[usize], b: &[usize]) -> (Vec<Vec<u64>>, Vec<u64>, Vec<u64>) {
    let ka = a.iter().copied().max().map_or(0, |m| m + 1);
    let kb = b.iter().copied().max().map_or(0, |m| m + 1);
    let mut table = vec![vec![0u64; kb]; ka];
    let mut ra = vec![0u64; ka];
    let mut rb = vec![0u64; kb];
    for (&x, &y) in a.iter().zip(b.iter()) {
        table[x][y] += 1;
        ra[x] += 1;
        rb[y] += 1;
    }
    (table, ra, rb)
}

fn choose2(n: u64) -> f64 {
    (n as f64) * (n as f64 - 1.0) / 2.0
}

/// Unadjusted Rand index: the fraction of object pairs on which the two
/// partitions agree. Defined as 1 when there are fewer than two objects.
pub fn rand_index(a: &[usize], b: &[usize]) -> Result<f64, PosteriorError> {
    check_len(a, b)?;
    let n = a.len() as u64;
    if n < 2 {
        return Ok(1.0);
    }
    let (table, ra, rb) = contingency(a, b);
    let same_both: f64 = table.iter().flatten().map(|&c| choose2(c)).sum();
    let same_a: f64 = ra.iter().map(|&c| choose2(c)).sum();
    let same_b: f64 = rb.iter().map(|&c| choose2(c)).sum();
    let total = choose2(n);
    // agreements = pairs together in both + pairs apart in both
    let agree = same_both + (total - same_a - same_b + same_both);
    Ok(agree / total)
}

/// Adjusted Rand index (chance-corrected pair counting).
pub fn adjusted_rand(a: &[usize], b: &[usize]) -> Result<f64, PosteriorError> {
    check_len(a, b)?;
    let n = a.len() as u64;
    if n < 2 {
        return Ok(1.0);
    }
    let (table, ra, rb) = contingency(a, b);
    let index: f64 = table.iter().flatten().map(|&c| choose2(c)).sum();
    let sum_a: f64 = ra.iter().map(|&c| choose2(c)).sum();
    let sum_b: f64 = rb.iter().map(|&c| choose2(c)).sum();
    let total = choose2(n);
    let expected = sum_a * sum_b / total;
    let max_index = 0.5 * (sum_a + sum_b);
    if (max_index - expected).abs() < 1e-300 {
        return Ok(1.0);
    }
    Ok((index - expected) / (max_index - expected))
}

/// Variation of information in nats: H(a) + H(b) - 2 I(a; b).
pub fn variation_of_information(a: &[usize], b: &[usize]) -> Result<f64, PosteriorError> {
    check_len(a, b)?;
    let n = a.len() as f64;
    if a.is_empty() {
        return Ok(0.0);
    }
    let (table, ra, rb) = contingency(a, b);
    let h = |counts: &[u64]| -> f64 {
        counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .sum()
    };
    let ha = h(&ra);
    let hb = h(&rb);
    let mut mi = 0.0;
    for (x, row) in table.iter().enumerate() {
        for (y, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let pxy = c as f64 / n;
            let px = ra[x] as f64 / n;
            let py = rb[y] as f64 / n;
            mi += pxy * (pxy / (px * py)).ln();
        }
    }
    Ok((ha + hb - 2.0 * mi).max(0.0))
}

/// The retained draw minimizing the mean VI to all other retained draws;
/// ties break to the earliest draw. Identical draws are deduplicated
/// before the quadratic scan.
pub fn point_estimate(draws: &[Vec<usize>]) -> Result<Partition, PosteriorError> {
    if draws.is_empty() {
        return Err(PosteriorError::EmptyTrace);
    }
    // canonical labels -> (first index, count)
    let mut uniq: Vec<Vec<usize>> = Vec::new();
    let mut counts: Vec<f64> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    for z in draws {
        let canon = Partition::from_labels(z).labels().to_vec();
        match index.get(&canon) {
            Some(&u) => counts[u] += 1.0,
            None => {
                index.insert(canon.clone(), uniq.len());
                uniq.push(canon);
                counts.push(1.0);
            }
        }
    }
    let u = uniq.len();
    let mut best = 0usize;
    let mut best_mean = f64::INFINITY;
    // pairwise VI over unique draws, weighted by multiplicity
    let mut vi = vec![0.0; u * u];
    for a in 0..u {
        for b in (a + 1)..u {
            let v = variation_of_information(&uniq[a], &uniq[b])?;
            vi[a * u + b] = v;
            vi[b * u + a] = v;
        }
    }
    let t: f64 = counts.iter().sum();
    for a in 0..u {
        let mean: f64 = (0..u).map(|b| counts[b] * vi[a * u + b]).sum::<f64>() / t;
        if mean < best_mean {
            best_mean = mean;
            best = a;
        }
    }
    Ok(Partition::from_labels(&uniq[best]))
}

/// Empirical posterior over the number of clusters.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct KPosterior {
    /// (k, probability) sorted by k
    pub pmf: Vec<(usize, f64)>,
    pub mean: f64,
    /// unbiased sample standard deviation (0 for a single draw)
    pub sd: f64,
}

pub fn k_posterior(draws: &[Vec<usize>]) -> Result<KPosterior, PosteriorError> {
    if draws.is_empty() {
        return Err(PosteriorError::EmptyTrace);
    }
    let ks: Vec<usize> = draws
        .iter()
        .map(|z| {
            let mut seen = z.clone();
            seen.sort_unstable();
            seen.dedup();
            seen.len()
        })
        .collect();
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &k in &ks {
        *counts.entry(k).or_insert(0) += 1;
    }
    let t = ks.len() as f64;
    let mut pmf: Vec<(usize, f64)> = counts.into_iter().map(|(k, c)| (k, c as f64 / t)).collect();
    pmf.sort_unstable_by_key(|&(k, _)| k);
    let mean = ks.iter().map(|&k| k as f64).sum::<f64>() / t;
    let sd = if ks.len() > 1 {
        (ks.iter().map(|&k| (k as f64 - mean).powi(2)).sum::<f64>() / (t - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(KPosterior { pmf, mean, sd })
}
