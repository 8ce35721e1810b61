//! PAM (build + swap) K-medoids, elbow selection of K, and the
//! exhaustive MAP-correspondence check used by the test suite.

use crate::core::{induce_partition, DistanceMatrix, MedoidSet, Partition};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum KMedoidsError {
    #[error("k = {k} outside 1..={n}")]
    InvalidK { k: usize, n: usize },
    #[error("degenerate k range {lo}..={hi} for {n} objects")]
    DegenerateRange { lo: usize, hi: usize, n: usize },
}

#[derive(Debug, Clone)]
pub struct PamResult {
    pub medoids: MedoidSet,
    pub labels: Partition,
    /// sum of member-to-medoid distances
    pub cost: f64,
    /// number of applied swaps
    pub iterations: usize,
}

/// Cost of a medoid set: each non-medoid object contributes its distance
/// to the nearest medoid.
pub fn medoid_cost(d: &DistanceMatrix, medoids: &[usize]) -> f64 {
    let mut cost = 0.0;
    for j in 0..d.n() {
        let mut best = f64::INFINITY;
        for &m in medoids {
            best = best.min(d.get(m, j));
        }
        cost += best;
    }
    cost
}

/// PAM: greedy BUILD initialization followed by SWAP steps until no
/// single medoid-for-non-medoid exchange lowers the cost. Deterministic;
/// ties break to the smallest index.
pub fn pam(d: &DistanceMatrix, k: usize) -> Result<PamResult, KMedoidsError> {
    let n = d.n();
    if k == 0 || k > n {
        return Err(KMedoidsError::InvalidK { k, n });
    }
    // BUILD: start from the object minimizing total distance, then add
    // whichever object reduces the cost most.
    let mut medoids: Vec<usize> = Vec::with_capacity(k);
    let mut nearest = vec![f64::INFINITY; n];
    {
        let mut best = 0;
        let mut best_cost = f64::INFINITY;
        for c in 0..n {
            let cost: f64 = (0..n).map(|j| d.get(c, j)).sum();
            if cost < best_cost {
                best_cost = cost;
                best = c;
            }
        }
        medoids.push(best);
        for j in 0..n {
            nearest[j] = d.get(best, j);
        }
    }
    while medoids.len() < k {
        let mut best = usize::MAX;
        let mut best_gain = f64::NEG_INFINITY;
        for c in 0..n {
            if medoids.contains(&c) {
                continue;
            }
            let gain: f64 = (0..n).map(|j| (nearest[j] - d.get(c, j)).max(0.0)).sum();
            if gain > best_gain {
                best_gain = gain;
                best = c;
            }
        }
        medoids.push(best);
        for j in 0..n {
            nearest[j] = nearest[j].min(d.get(best, j));
        }
    }
    // SWAP: steepest descent on (medoid out, candidate in) exchanges.
    // Nearest/second-nearest bookkeeping makes one full pass O(N(N-K)):
    // for a candidate c, the cost change of removing each medoid comes
    // from a single scan over the objects.
    let mut is_medoid = vec![false; n];
    for &m in &medoids {
        is_medoid[m] = true;
    }
    let mut nearest_idx = vec![0usize; n];
    let mut nearest = vec![0.0f64; n];
    let mut second = vec![0.0f64; n];
    let refresh = |medoids: &[usize],
                   nearest_idx: &mut [usize],
                   nearest: &mut [f64],
                   second: &mut [f64]| {
        for j in 0..n {
            let mut n1 = f64::INFINITY;
            let mut n2 = f64::INFINITY;
            let mut i1 = 0usize;
            for (mi, &m) in medoids.iter().enumerate() {
                let dist = d.get(m, j);
                if dist < n1 {
                    n2 = n1;
                    n1 = dist;
                    i1 = mi;
                } else if dist < n2 {
                    n2 = dist;
                }
            }
            nearest_idx[j] = i1;
            nearest[j] = n1;
            second[j] = n2;
        }
    };
    refresh(&medoids, &mut nearest_idx, &mut nearest, &mut second);
    let mut iterations = 0usize;
    loop {
        let mut best_delta = -1e-12;
        let mut best_swap: Option<(usize, usize)> = None;
        let mut delta = vec![0.0f64; k];
        for c in 0..n {
            if is_medoid[c] {
                continue;
            }
            delta.fill(0.0);
            // contribution shared by every removal choice, plus the
            // correction for removing an object's own nearest medoid
            let mut shared = 0.0;
            for j in 0..n {
                let dc = d.get(c, j);
                let i0 = nearest_idx[j];
                if dc < nearest[j] {
                    // j switches to c no matter which medoid leaves, and
                    // for i0 the shared term is already the whole change
                    shared += dc - nearest[j];
                } else {
                    delta[i0] += dc.min(second[j]) - nearest[j];
                }
            }
            for (mi, &dl) in delta.iter().enumerate() {
                let total = dl + shared;
                if total < best_delta {
                    best_delta = total;
                    best_swap = Some((mi, c));
                }
            }
        }
        match best_swap {
            Some((mi, c)) => {
                is_medoid[medoids[mi]] = false;
                is_medoid[c] = true;
                medoids[mi] = c;
                refresh(&medoids, &mut nearest_idx, &mut nearest, &mut second);
                iterations += 1;
            }
            None => break,
        }
    }
    let medoids = MedoidSet::new(medoids, n).expect("valid by construction");
    let labels = induce_partition(d, &medoids);
    let cost = medoid_cost(d, medoids.indices());
    Ok(PamResult { medoids, labels, cost, iterations })
}

/// Default elbow sweep range: 2 ..= min(30, n/2), falling back to 1..=1
/// for tiny inputs.
pub fn default_k_range(n: usize) -> (usize, usize) {
    if n < 4 {
        (1, 1.max(n / 2))
    } else {
        (2, 30.min(n / 2))
    }
}

/// Pick K by the elbow of the PAM cost curve: the K whose point lies
/// farthest from the chord between the curve's endpoints, with both axes
/// normalized to [0,1]. Flat curves (and all ties) resolve to the
/// smallest K in the range.
pub fn elbow_k(d: &DistanceMatrix, lo: usize, hi: usize) -> Result<usize, KMedoidsError> {
    let n = d.n();
    if lo == 0 || lo > hi || hi > n {
        return Err(KMedoidsError::DegenerateRange { lo, hi, n });
    }
    if lo == hi {
        return Ok(lo);
    }
    let ks: Vec<usize> = (lo..=hi).collect();
    let costs: Vec<f64> = ks
        .iter()
        .map(|&k| pam(d, k).map(|r| r.cost))
        .collect::<Result<_, _>>()?;
    let c0 = costs[0];
    let c1 = *costs.last().unwrap();
    let span = (c0 - c1).abs();
    if span < 1e-12 {
        return Ok(lo);
    }
    // normalized perpendicular distance to the chord
    let kf = |k: usize| (k - lo) as f64 / (hi - lo) as f64;
    let cf = |c: f64| (c - c1) / (c0 - c1);
    let (x0, y0) = (0.0f64, 1.0f64);
    let (x1, y1) = (1.0f64, 0.0f64);
    let len = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt();
    let mut best = lo;
    let mut best_dist = f64::NEG_INFINITY;
    for (i, &k) in ks.iter().enumerate() {
        let (x, y) = (kf(k), cf(costs[i]));
        let dist = ((x1 - x0) * (y0 - y) - (x0 - x) * (y1 - y0)).abs() / len;
        if dist > best_dist + 1e-12 {
            best_dist = dist;
            best = k;
        }
    }
    Ok(best)
}

/// All medoid sets of size k achieving the exhaustive minimum cost
/// (within 1e-9 of the optimum). Exponential; meant for small n.
pub fn exhaustive_best_medoids(d: &DistanceMatrix, k: usize) -> Vec<Vec<usize>> {
    let n = d.n();
    assert!(k >= 1 && k <= n);
    let mut best_cost = f64::INFINITY;
    let mut best: Vec<Vec<usize>> = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        let cost = medoid_cost(d, &combo);
        if cost < best_cost - 1e-9 {
            best_cost = cost;
            best.clear();
            best.push(combo.clone());
        } else if (cost - best_cost).abs() <= 1e-9 {
            best.push(combo.clone());
        }
        // next k-combination of 0..n
        let mut i = k;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if combo[i] != i + n - k {
                combo[i] += 1;
                for j in (i + 1)..k {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Exhaustive witness that the fixed-K posterior mode under the
/// exp(-distance) cohesion (no repulsion) and the K-medoids optimum
/// coincide. The posterior log-density of a medoid set is the negated
/// PAM cost, so the argmax and argmin must agree (ties: set overlap).
pub fn map_equivalence_check(d: &DistanceMatrix, k: usize) -> bool {
    let optima = exhaustive_best_medoids(d, k);
    // independently maximize the posterior route
    let n = d.n();
    let mut best_lp = f64::NEG_INFINITY;
    let mut modes: Vec<Vec<usize>> = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        // log posterior (up to the fixed-K normalizer): sum over
        // non-medoids of -distance to nearest medoid
        let lp = -medoid_cost(d, &combo);
        if lp > best_lp + 1e-9 {
            best_lp = lp;
            modes.clear();
            modes.push(combo.clone());
        } else if (lp - best_lp).abs() <= 1e-9 {
            modes.push(combo.clone());
        }
        let mut i = k;
        let mut done = false;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if combo[i] != i + n - k {
                combo[i] += 1;
                for j in (i + 1)..k {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
        if done {
            break;
        }
    }
    modes.iter().any(|m| optima.contains(m))
}
