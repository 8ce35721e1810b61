//! Domain types and tessellation induction in discrete space.
//!
//! A [`DistanceMatrix`] plus a [`MedoidSet`] induce a [`Partition`] by
//! assigning every object to its nearest medoid. All types here are
//! immutable after construction and the operations are pure functions,
//! so they can be shared freely across threads.

use thiserror::Error;

/// Distances at or below this floor are clamped before Gamma likelihood
/// evaluation; the tessellation itself always sees the raw values.
pub const GAMMA_DISTANCE_FLOOR: f64 = 1e-12;

/// Symmetry slack accepted by [`validate_distance_matrix`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NonSquare { rows: usize, row: usize, cols: usize },
    #[error("asymmetry beyond tolerance at ({i},{j}): |{a} - {b}| > {tol}")]
    AsymmetryBeyondTolerance { i: usize, j: usize, a: f64, b: f64, tol: f64 },
    #[error("negative entry {value} at ({i},{j})")]
    NegativeEntry { i: usize, j: usize, value: f64 },
    #[error("non-finite entry at ({i},{j})")]
    NonFiniteEntry { i: usize, j: usize },
    #[error("empty matrix")]
    Empty,
}

#[derive(Debug, Error, PartialEq)]
pub enum MedoidError {
    #[error("medoid set must be nonempty")]
    EmptySet,
    #[error("medoid index {index} out of range for {n} objects")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("duplicate medoid index {index}")]
    DuplicateIndex { index: usize },
}

#[derive(Debug, Error, PartialEq)]
pub enum NestedError {
    #[error("layer-1 cluster {cluster} contains no layer-2 medoid")]
    EmptyMedoidIntersection { cluster: usize },
}

/// Validated symmetric N x N matrix of pairwise distances.
///
/// Invariants: zero diagonal, symmetric, nonnegative, finite. Stored
/// dense row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DistanceMatrix {
    /// Number of objects.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Distance between objects `i` and `j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Distance clamped away from zero for Gamma density evaluation.
    #[inline]
    pub fn get_clamped(&self, i: usize, j: usize) -> f64 {
        self.get(i, j).max(GAMMA_DISTANCE_FLOOR)
    }

    /// Row `i` as a slice.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// Flat row-major storage.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Restriction to the given objects, preserving their order.
    pub fn restrict(&self, keep: &[usize]) -> DistanceMatrix {
        let m = keep.len();
        let mut values = vec![0.0; m * m];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                values[a * m + b] = self.get(i, j);
            }
        }
        DistanceMatrix { n: m, values }
    }
}

/// Validate a raw square matrix as a distance matrix.
///
/// Symmetrizes entries whose mismatch is within [`SYMMETRY_TOLERANCE`]
/// (averaging the two), zeroes a diagonal that is within tolerance of
/// zero, and rejects anything worse.
pub fn validate_distance_matrix(raw: &[Vec<f64>]) -> Result<DistanceMatrix, MatrixError> {
    let n = raw.len();
    if n == 0 {
        return Err(MatrixError::Empty);
    }
    for (row, r) in raw.iter().enumerate() {
        if r.len() != n {
            return Err(MatrixError::NonSquare { rows: n, row, cols: r.len() });
        }
    }
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let v = raw[i][j];
            if !v.is_finite() {
                return Err(MatrixError::NonFiniteEntry { i, j });
            }
            if v < 0.0 {
                return Err(MatrixError::NegativeEntry { i, j, value: v });
            }
        }
    }
    for i in 0..n {
        let d = raw[i][i];
        if d.abs() >= SYMMETRY_TOLERANCE {
            return Err(MatrixError::AsymmetryBeyondTolerance {
                i,
                j: i,
                a: d,
                b: 0.0,
                tol: SYMMETRY_TOLERANCE,
            });
        }
        values[i * n + i] = 0.0;
        for j in (i + 1)..n {
            let a = raw[i][j];
            let b = raw[j][i];
            if (a - b).abs() > SYMMETRY_TOLERANCE {
                return Err(MatrixError::AsymmetryBeyondTolerance {
                    i,
                    j,
                    a,
                    b,
                    tol: SYMMETRY_TOLERANCE,
                });
            }
            let v = 0.5 * (a + b);
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    Ok(DistanceMatrix { n, values })
}

/// Build a distance matrix from a flat row-major buffer (used by the
/// binary reader); applies the same validation as the row form.
pub fn validate_distance_matrix_flat(n: usize, flat: &[f64]) -> Result<DistanceMatrix, MatrixError> {
    if flat.len() != n * n {
        return Err(MatrixError::NonSquare { rows: n, row: 0, cols: flat.len() / n.max(1) });
    }
    let rows: Vec<Vec<f64>> = (0..n).map(|i| flat[i * n..(i + 1) * n].to_vec()).collect();
    validate_distance_matrix(&rows)
}

/// Ordered set of object indices acting as tessellation centers.
///
/// Indices are 0-based internally, stored strictly increasing; the
/// position of a medoid in the sorted set is its cluster id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MedoidSet {
    indices: Vec<usize>,
}

impl MedoidSet {
    /// Build from indices in any order; duplicates and out-of-range
    /// indices are rejected.
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<MedoidSet, MedoidError> {
        if indices.is_empty() {
            return Err(MedoidError::EmptySet);
        }
        indices.sort_unstable();
        for w in indices.windows(2) {
            if w[0] == w[1] {
                return Err(MedoidError::DuplicateIndex { index: w[0] });
            }
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(MedoidError::IndexOutOfRange { index: last, n });
            }
        }
        Ok(MedoidSet { indices })
    }

    pub fn k(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    /// Position of `index` in the sorted set, if present.
    pub fn position(&self, index: usize) -> Option<usize> {
        self.indices.binary_search(&index).ok()
    }
}

/// Cluster-label vector over the objects plus the cluster rosters.
///
/// In tessellation-induced partitions the cluster ids are the positions
/// of the medoids in the sorted medoid set; a roster can only be empty
/// in the degenerate case of two medoids at distance zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
    clusters: Vec<Vec<usize>>,
}

impl Partition {
    /// Group objects by label. Labels must be dense in `0..k`.
    pub fn from_dense_labels(labels: Vec<usize>, k: usize) -> Partition {
        let mut clusters = vec![Vec::new(); k];
        for (j, &z) in labels.iter().enumerate() {
            clusters[z].push(j);
        }
        Partition { labels, clusters }
    }

    /// Build from an arbitrary label vector, relabelling clusters by
    /// first appearance so the result is canonical.
    pub fn from_labels(raw: &[usize]) -> Partition {
        let mut map: Vec<(usize, usize)> = Vec::new();
        let mut labels = Vec::with_capacity(raw.len());
        for &z in raw {
            let id = match map.iter().find(|(orig, _)| *orig == z) {
                Some(&(_, id)) => id,
                None => {
                    let id = map.len();
                    map.push((z, id));
                    id
                }
            };
            labels.push(id);
        }
        let k = map.len();
        Partition::from_dense_labels(labels, k)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of clusters (including any degenerate empty rosters).
    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    /// Number of nonempty clusters.
    pub fn k_nonempty(&self) -> usize {
        self.clusters.iter().filter(|c| !c.is_empty()).count()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, j: usize) -> usize {
        self.labels[j]
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn cluster(&self, id: usize) -> &[usize] {
        &self.clusters[id]
    }

    /// Cluster sizes, skipping empty rosters.
    pub fn sizes(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.len()).filter(|&s| s > 0).collect()
    }

    /// Same set partition, ignoring label names.
    pub fn same_blocks(&self, other: &Partition) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let a = Partition::from_labels(&self.labels);
        let b = Partition::from_labels(&other.labels);
        a.labels == b.labels
    }
}

/// Two distance matrices over the same objects.
#[derive(Debug, Clone)]
pub struct MultiViewData {
    pub d1: DistanceMatrix,
    pub d2: DistanceMatrix,
}

impl MultiViewData {
    pub fn new(d1: DistanceMatrix, d2: DistanceMatrix) -> Result<MultiViewData, MatrixError> {
        if d1.n() != d2.n() {
            return Err(MatrixError::NonSquare { rows: d1.n(), row: 0, cols: d2.n() });
        }
        Ok(MultiViewData { d1, d2 })
    }

    pub fn n(&self) -> usize {
        self.d1.n()
    }
}

/// Assign every object to its nearest medoid.
///
/// Ties break to the smallest medoid index, which makes the map total
/// and deterministic; the self-distance of zero means each medoid wins
/// its own cluster unless another medoid sits at distance zero from it.
pub fn induce_partition(d: &DistanceMatrix, medoids: &MedoidSet) -> Partition {
    let n = d.n();
    let k = medoids.k();
    let mut labels = vec![0usize; n];
    for j in 0..n {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (pos, &m) in medoids.indices().iter().enumerate() {
            let dm = d.get(m, j);
            if dm < best_d {
                best_d = dm;
                best = pos;
            }
        }
        labels[j] = best;
    }
    Partition::from_dense_labels(labels, k)
}

/// Induce the two layers of a nested tessellation.
///
/// Layer 1 is the plain tessellation of `d1` by `gamma1`; the layer-2
/// label of object `j` is its nearest `gamma2` medoid under `d2`,
/// restricted to the medoids inside `j`'s layer-1 cluster. Fails if any
/// layer-1 cluster contains no layer-2 medoid.
pub fn induce_nested_partition(
    mv: &MultiViewData,
    gamma1: &MedoidSet,
    gamma2: &MedoidSet,
) -> Result<(Partition, Partition), NestedError> {
    let t1 = induce_partition(&mv.d1, gamma1);
    let t2 = induce_second_layer(mv, &t1, gamma2)?;
    Ok((t1, t2))
}

/// Layer-2 restricted tessellation given an already-induced layer 1.
pub fn induce_second_layer(
    mv: &MultiViewData,
    t1: &Partition,
    gamma2: &MedoidSet,
) -> Result<Partition, NestedError> {
    let n = mv.n();
    let k2 = gamma2.k();
    // medoids of gamma2 per layer-1 cluster
    let mut per_cluster: Vec<Vec<usize>> = vec![Vec::new(); t1.k()];
    for (pos, &m) in gamma2.indices().iter().enumerate() {
        per_cluster[t1.label(m)].push(pos);
    }
    for (c, roster) in t1.clusters().iter().enumerate() {
        if !roster.is_empty() && per_cluster[c].is_empty() {
            return Err(NestedError::EmptyMedoidIntersection { cluster: c });
        }
    }
    let mut labels = vec![0usize; n];
    for j in 0..n {
        let candidates = &per_cluster[t1.label(j)];
        let mut best = candidates[0];
        let mut best_d = f64::INFINITY;
        for &pos in candidates {
            let m = gamma2.indices()[pos];
            let dm = mv.d2.get(m, j);
            if dm < best_d {
                best_d = dm;
                best = pos;
            }
        }
        labels[j] = best;
    }
    Ok(Partition::from_dense_labels(labels, k2))
}

/// Repair a layer-2 medoid set so the nested precondition holds: every
/// layer-1 cluster with no layer-2 medoid gains its own layer-1 medoid.
pub fn repair_nested_medoids(
    mv: &MultiViewData,
    gamma1: &MedoidSet,
    gamma2: &MedoidSet,
) -> MedoidSet {
    let t1 = induce_partition(&mv.d1, gamma1);
    let mut indices = gamma2.indices().to_vec();
    for (c, roster) in t1.clusters().iter().enumerate() {
        if roster.is_empty() {
            continue;
        }
        let has_medoid = roster.iter().any(|&j| gamma2.contains(j));
        if !has_medoid {
            indices.push(gamma1.indices()[c]);
        }
    }
    MedoidSet::new(indices, mv.n()).expect("repair preserves validity")
}

/// Definition check for nested partitions: equal layer-2 labels imply
/// equal layer-1 labels.
pub fn is_refinement(t2: &Partition, t1: &Partition) -> bool {
    if t1.n() != t2.n() {
        return false;
    }
    for roster in t2.clusters() {
        if roster.is_empty() {
            continue;
        }
        let first = t1.label(roster[0]);
        if roster.iter().any(|&j| t1.label(j) != first) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[f64]]) -> DistanceMatrix {
        let raw: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        validate_distance_matrix(&raw).unwrap()
    }

    #[test]
    fn zero_matrix_is_valid() {
        let d = validate_distance_matrix(&vec![vec![0.0; 3]; 3]).unwrap();
        assert_eq!(d.n(), 3);
        assert!(d.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn two_object_symmetric_is_valid() {
        let d = matrix(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(d.get(0, 1), 1.0);
    }

    #[test]
    fn asymmetry_beyond_tolerance_rejected() {
        let err = validate_distance_matrix(&[vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap_err();
        assert!(matches!(err, MatrixError::AsymmetryBeyondTolerance { .. }));
    }

    #[test]
    fn small_asymmetry_is_averaged() {
        let d = validate_distance_matrix(&[vec![0.0, 1.0], vec![1.0 + 5e-10, 0.0]]).unwrap();
        assert!((d.get(0, 1) - (1.0 + 2.5e-10)).abs() < 1e-15);
        assert_eq!(d.get(0, 1), d.get(1, 0));
    }

    #[test]
    fn negative_and_nonfinite_rejected() {
        let err = validate_distance_matrix(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap_err();
        assert!(matches!(err, MatrixError::NegativeEntry { .. }));
        let err = validate_distance_matrix(&[vec![0.0, f64::NAN], vec![1.0, 0.0]]).unwrap_err();
        assert!(matches!(err, MatrixError::NonFiniteEntry { .. }));
    }

    #[test]
    fn non_square_rejected() {
        let err = validate_distance_matrix(&[vec![0.0, 1.0], vec![1.0]]).unwrap_err();
        assert!(matches!(err, MatrixError::NonSquare { .. }));
    }

    /// Worked example: gamma = {2,5} 1-based over 5 objects, first row of
    /// distances [0,3,1,10,4]: object 1 is nearest the medoid with index 2,
    /// so its label is the first cluster.
    #[test]
    fn nearest_medoid_from_distance_row() {
        // 0-based: medoids {1, 4}; only object 0's assignment is pinned,
        // so fill the remaining rows symmetrically with large values.
        let raw = vec![
            vec![0.0, 3.0, 1.0, 10.0, 4.0],
            vec![3.0, 0.0, 9.0, 9.0, 9.0],
            vec![1.0, 9.0, 0.0, 9.0, 9.0],
            vec![10.0, 9.0, 9.0, 0.0, 9.0],
            vec![4.0, 9.0, 9.0, 9.0, 0.0],
        ];
        let d = validate_distance_matrix(&raw).unwrap();
        let medoids = MedoidSet::new(vec![1, 4], 5).unwrap();
        let t = induce_partition(&d, &medoids);
        assert_eq!(t.label(0), 0);
    }

    #[test]
    fn all_objects_as_medoids_gives_singletons() {
        let raw = vec![
            vec![0.0, 2.0, 3.0],
            vec![2.0, 0.0, 4.0],
            vec![3.0, 4.0, 0.0],
        ];
        let d = validate_distance_matrix(&raw).unwrap();
        let medoids = MedoidSet::new(vec![0, 1, 2], 3).unwrap();
        let t = induce_partition(&d, &medoids);
        assert_eq!(t.sizes(), vec![1, 1, 1]);
        for j in 0..3 {
            assert_eq!(t.label(j), j);
        }
    }

    #[test]
    fn induced_labels_match_bruteforce_argmin() {
        let mut d_raw = vec![vec![0.0; 6]; 6];
        let vals = [
            (0, 1, 2.0),
            (0, 2, 5.0),
            (0, 3, 7.0),
            (0, 4, 1.5),
            (0, 5, 3.0),
            (1, 2, 2.2),
            (1, 3, 6.0),
            (1, 4, 4.0),
            (1, 5, 0.7),
            (2, 3, 1.2),
            (2, 4, 8.0),
            (2, 5, 2.9),
            (3, 4, 3.3),
            (3, 5, 5.1),
            (4, 5, 6.6),
        ];
        for &(i, j, v) in &vals {
            d_raw[i][j] = v;
            d_raw[j][i] = v;
        }
        let d = validate_distance_matrix(&d_raw).unwrap();
        let medoids = MedoidSet::new(vec![0, 3], 6).unwrap();
        let t = induce_partition(&d, &medoids);
        for j in 0..6 {
            // exhaustive scan with the same tie rule
            let mut best = usize::MAX;
            let mut best_d = f64::INFINITY;
            for (pos, &m) in medoids.indices().iter().enumerate() {
                if d.get(m, j) < best_d {
                    best_d = d.get(m, j);
                    best = pos;
                }
            }
            assert_eq!(t.label(j), best);
        }
    }

    #[test]
    fn medoids_map_to_themselves() {
        let mut raw = vec![vec![0.0; 5]; 5];
        for i in 0..5 {
            for j in (i + 1)..5 {
                let v = 1.0 + ((i * 5 + j) as f64 * 0.37).sin().abs();
                raw[i][j] = v;
                raw[j][i] = v;
            }
        }
        let d = validate_distance_matrix(&raw).unwrap();
        let medoids = MedoidSet::new(vec![1, 3, 4], 5).unwrap();
        let t = induce_partition(&d, &medoids);
        for (pos, &m) in medoids.indices().iter().enumerate() {
            assert_eq!(t.label(m), pos);
        }
    }

    fn six_object_mv() -> MultiViewData {
        let mut raw1 = vec![vec![0.0; 6]; 6];
        let mut raw2 = vec![vec![0.0; 6]; 6];
        // two far blocks {0,1,2} and {3,4,5}
        for i in 0..6 {
            for j in (i + 1)..6 {
                let same = (i < 3) == (j < 3);
                let base = if same { 1.0 } else { 10.0 };
                let v = base + 0.1 * (i + j) as f64;
                raw1[i][j] = v;
                raw1[j][i] = v;
                let w = base + 0.07 * (2 * i + j) as f64;
                raw2[i][j] = w;
                raw2[j][i] = w;
            }
        }
        MultiViewData::new(
            validate_distance_matrix(&raw1).unwrap(),
            validate_distance_matrix(&raw2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn nested_identity_when_layers_share_medoids() {
        let mv = six_object_mv();
        let mv_same = MultiViewData::new(mv.d1.clone(), mv.d1.clone()).unwrap();
        let g = MedoidSet::new(vec![0, 3], 6).unwrap();
        let (t1, t2) = induce_nested_partition(&mv_same, &g, &g).unwrap();
        assert_eq!(t1.labels(), t2.labels());
    }

    #[test]
    fn nested_labels_match_restricted_bruteforce() {
        let mv = six_object_mv();
        let g1 = MedoidSet::new(vec![0, 3], 6).unwrap();
        let g2 = MedoidSet::new(vec![0, 2, 3, 5], 6).unwrap();
        let (t1, t2) = induce_nested_partition(&mv, &g1, &g2).unwrap();
        for j in 0..6 {
            let mut best = usize::MAX;
            let mut best_d = f64::INFINITY;
            for (pos, &m) in g2.indices().iter().enumerate() {
                if t1.label(m) != t1.label(j) {
                    continue;
                }
                if mv.d2.get(m, j) < best_d {
                    best_d = mv.d2.get(m, j);
                    best = pos;
                }
            }
            assert_eq!(t2.label(j), best);
        }
        assert!(is_refinement(&t2, &t1));
    }

    #[test]
    fn nested_missing_medoid_is_error() {
        let mv = six_object_mv();
        let g1 = MedoidSet::new(vec![0, 3], 6).unwrap();
        let g2 = MedoidSet::new(vec![0, 1], 6).unwrap(); // nothing in cluster of 3
        let err = induce_nested_partition(&mv, &g1, &g2).unwrap_err();
        assert_eq!(err, NestedError::EmptyMedoidIntersection { cluster: 1 });
    }

    #[test]
    fn repair_adds_layer1_medoid() {
        let mv = six_object_mv();
        let g1 = MedoidSet::new(vec![0, 3], 6).unwrap();
        let g2 = MedoidSet::new(vec![0], 6).unwrap();
        let repaired = repair_nested_medoids(&mv, &g1, &g2);
        assert_eq!(repaired.indices(), &[0, 3]);
        assert!(induce_nested_partition(&mv, &g1, &repaired).is_ok());
    }

    #[test]
    fn repair_keeps_valid_pair_unchanged() {
        let mv = six_object_mv();
        let g1 = MedoidSet::new(vec![0, 3], 6).unwrap();
        let g2 = MedoidSet::new(vec![1, 4], 6).unwrap();
        let repaired = repair_nested_medoids(&mv, &g1, &g2);
        assert_eq!(repaired.indices(), g2.indices());
    }

    #[test]
    fn medoid_set_rejects_bad_inputs() {
        assert_eq!(MedoidSet::new(vec![], 4).unwrap_err(), MedoidError::EmptySet);
        assert!(matches!(
            MedoidSet::new(vec![0, 4], 4).unwrap_err(),
            MedoidError::IndexOutOfRange { .. }
        ));
        assert!(matches!(
            MedoidSet::new(vec![1, 1], 4).unwrap_err(),
            MedoidError::DuplicateIndex { .. }
        ));
    }

    #[test]
    fn partition_from_labels_is_canonical() {
        let t = Partition::from_labels(&[7, 7, 2, 9, 2]);
        assert_eq!(t.labels(), &[0, 0, 1, 2, 1]);
        assert_eq!(t.k(), 3);
        assert_eq!(t.cluster(0), &[0, 1]);
    }

    /// Hub construction: all distances to
    /// object 0 equal `a`, every other off-diagonal distance larger.
    #[test]
    fn microclustering_counterexample_small() {
        let n = 12;
        let k = 3;
        let a = 1.0;
        let mut raw = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = if i == 0 { a } else { a + 1.0 + (i + j) as f64 * 0.01 };
                raw[i][j] = v;
                raw[j][i] = v;
            }
        }
        let d = validate_distance_matrix(&raw).unwrap();
        let medoids = MedoidSet::new((0..k).collect(), n).unwrap();
        let t = induce_partition(&d, &medoids);
        let largest = t.sizes().into_iter().max().unwrap();
        assert_eq!(largest, n - k + 1);
    }
}
