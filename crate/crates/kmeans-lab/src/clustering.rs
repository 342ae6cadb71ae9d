//! Lloyd's and Hartigan's k-means, initializations, fixed-point
//! predicates, and PCA baselines.

use ndarray::{Array1, Array2, ArrayView1};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Dataset, Partition};
use crate::rng::SplitMix64;

/// Squared Euclidean distance between two rows.
#[inline]
pub fn sq_dist(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Cluster centroids with the sizes they were computed from. `sizes[k] == 0`
/// marks a row that is not backed by any samples (initial guesses, retained
/// centroids).
#[derive(Debug, Clone)]
pub struct CentroidSet {
    pub centers: Array2<f64>,
    pub sizes: Vec<usize>,
}

impl CentroidSet {
    pub fn k(&self) -> usize {
        self.centers.nrows()
    }
}

/// What to do when a Lloyd assignment step empties a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmptyClusterPolicy {
    /// Keep the cluster's previous centroid and continue.
    #[default]
    RetainCentroid,
    /// Stop with an error carrying the iteration index.
    Abort,
}

/// Sample visiting order for Hartigan sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepOrder {
    /// Ascending sample index, as in the textbook formulation.
    #[default]
    Fixed,
    /// Fresh seeded shuffle at every sweep.
    Shuffled { seed: u64 },
}

/// Knobs shared by both solvers. `max_iters` counts Lloyd iterations or
/// Hartigan full sweeps.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub max_iters: usize,
    pub tie_epsilon: f64,
    pub sweep_order: SweepOrder,
    pub empty_cluster_policy: EmptyClusterPolicy,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_iters: 1000,
            tie_epsilon: 0.0,
            sweep_order: SweepOrder::Fixed,
            empty_cluster_policy: EmptyClusterPolicy::RetainCentroid,
        }
    }
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters must be >= 1"));
        }
        if !self.tie_epsilon.is_finite() || self.tie_epsilon < 0.0 {
            return Err(Error::invalid("tie_epsilon must be finite and >= 0"));
        }
        Ok(())
    }
}

/// Trace of one solver run. The loss trajectory starts at the initial
/// objective and gains one entry per iteration/sweep; it is non-increasing,
/// and a converged run ends with two equal values.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub iterations: usize,
    pub loss_trajectory: Vec<f64>,
    pub moves_per_sweep: Vec<usize>,
    pub empty_cluster_events: usize,
    pub converged: bool,
}

/// Within-cluster sum of squared distances to the empirical centroids.
/// Summation is per cluster in ascending sample order, so the result is
/// bit-stable. Empty clusters make the loss undefined.
pub fn kmeans_loss(ds: &Dataset, p: &Partition) -> Result<f64> {
    let cs = centroids(ds, p)?;
    let mut total = 0.0;
    for k in 0..p.k() {
        for i in p.members(k) {
            total += sq_dist(ds.data.row(i), cs.centers.row(k));
        }
    }
    Ok(total)
}

/// Empirical centroids of a partition; errors on any empty cluster.
pub fn centroids(ds: &Dataset, p: &Partition) -> Result<CentroidSet> {
    if p.n() != ds.n() {
        return Err(Error::invalid(format!(
            "partition covers {} samples but dataset has {}",
            p.n(),
            ds.n()
        )));
    }
    if let Some(k) = p.sizes().iter().position(|&s| s == 0) {
        return Err(Error::EmptyCluster {
            cluster: k,
            iteration: None,
        });
    }
    Ok(centroids_allow_empty(ds, p))
}

fn centroids_allow_empty(ds: &Dataset, p: &Partition) -> CentroidSet {
    let (k, d) = (p.k(), ds.dim());
    let mut centers = Array2::zeros((k, d));
    for i in 0..ds.n() {
        let c = p.cluster_of(i);
        for j in 0..d {
            centers[[c, j]] += ds.data[[i, j]];
        }
    }
    for c in 0..k {
        let size = p.sizes()[c];
        if size > 0 {
            for j in 0..d {
                centers[[c, j]] /= size as f64;
            }
        }
    }
    CentroidSet {
        centers,
        sizes: p.sizes().to_vec(),
    }
}

/// Initial state for [`lloyd_run`]: either a starting partition or a set of
/// guess centers (the first assignment step then induces a partition).
#[derive(Debug, Clone)]
pub enum LloydInit {
    Partition(Partition),
    Centers(CentroidSet),
}

/// Nearest-centroid label for sample `i`. With `current` set, ties within
/// `tie_epsilon` keep the current label; otherwise the lowest index wins.
#[inline]
fn assign_one(
    x: ArrayView1<f64>,
    centers: &Array2<f64>,
    current: Option<usize>,
    tie_epsilon: f64,
) -> usize {
    let mut best_j = 0;
    let mut best = f64::INFINITY;
    for j in 0..centers.nrows() {
        let d = sq_dist(x, centers.row(j));
        if d < best {
            best = d;
            best_j = j;
        }
    }
    if let Some(cur) = current {
        let d_cur = sq_dist(x, centers.row(cur));
        if d_cur - best <= tie_epsilon {
            return cur;
        }
    }
    best_j
}

fn objective(ds: &Dataset, assign: &[usize], centers: &Array2<f64>) -> f64 {
    let mut total = 0.0;
    for k in 0..centers.nrows() {
        for (i, &a) in assign.iter().enumerate() {
            if a == k {
                total += sq_dist(ds.data.row(i), centers.row(k));
            }
        }
    }
    total
}

/// Lloyd's algorithm: alternate nearest-centroid assignment and centroid
/// averaging until the partition stops changing or `max_iters` is reached.
///
/// Distance ties keep the current assignment (within `tie_epsilon`), which
/// makes "fixed point" well-defined. Empty clusters follow the configured
/// policy. The report records the loss after every averaging step.
pub fn lloyd_run(ds: &Dataset, init: LloydInit, cfg: &RunConfig) -> Result<(Partition, RunReport)> {
    cfg.validate()?;
    let n = ds.n();

    let (k, mut centers, mut assign): (usize, Array2<f64>, Option<Vec<usize>>) = match init {
        LloydInit::Partition(p) => {
            let cs = centroids(ds, &p)?; // rejects empty initial clusters
            (p.k(), cs.centers, Some(p.assign().to_vec()))
        }
        LloydInit::Centers(cs) => {
            if cs.centers.ncols() != ds.dim() {
                return Err(Error::invalid("center dimension does not match dataset"));
            }
            if cs.k() == 0 {
                return Err(Error::invalid("need at least one center"));
            }
            (cs.k(), cs.centers, None)
        }
    };

    let initial_objective = match &assign {
        Some(a) => objective(ds, a, &centers),
        None => (0..n)
            .map(|i| {
                (0..k)
                    .map(|j| sq_dist(ds.data.row(i), centers.row(j)))
                    .fold(f64::INFINITY, f64::min)
            })
            .sum(),
    };

    let mut trajectory = vec![initial_objective];
    let mut empty_events = 0usize;
    let mut iterations = 0usize;
    let mut converged = false;

    for t in 1..=cfg.max_iters {
        let new_assign: Vec<usize> = (0..n)
            .map(|i| {
                assign_one(
                    ds.data.row(i),
                    &centers,
                    assign.as_ref().map(|a| a[i]),
                    cfg.tie_epsilon,
                )
            })
            .collect();
        let unchanged = assign.as_deref() == Some(&new_assign);

        let mut sizes = vec![0usize; k];
        for &a in &new_assign {
            sizes[a] += 1;
        }
        for (c, &s) in sizes.iter().enumerate() {
            if s == 0 {
                match cfg.empty_cluster_policy {
                    EmptyClusterPolicy::RetainCentroid => empty_events += 1,
                    EmptyClusterPolicy::Abort => {
                        return Err(Error::EmptyCluster {
                            cluster: c,
                            iteration: Some(t),
                        })
                    }
                }
            }
        }

        // Averaging step; empty clusters keep their previous centroid.
        let mut sums = Array2::<f64>::zeros((k, ds.dim()));
        for (i, &a) in new_assign.iter().enumerate() {
            for j in 0..ds.dim() {
                sums[[a, j]] += ds.data[[i, j]];
            }
        }
        for c in 0..k {
            if sizes[c] > 0 {
                for j in 0..ds.dim() {
                    centers[[c, j]] = sums[[c, j]] / sizes[c] as f64;
                }
            }
        }

        iterations = t;
        trajectory.push(objective(ds, &new_assign, &centers));
        assign = Some(new_assign);
        if unchanged {
            converged = true;
            break;
        }
    }

    let final_assign = assign.expect("max_iters >= 1 guarantees one pass");
    let partition = Partition::new(final_assign, k)?;
    Ok((
        partition,
        RunReport {
            iterations,
            loss_trajectory: trajectory,
            moves_per_sweep: Vec::new(),
            empty_cluster_events: empty_events,
            converged,
        },
    ))
}

/// Hartigan weighted squared distance from sample `i` to cluster `j`:
/// `|C_j|/(|C_j|-1) * ||x_i - mu_j||^2` when `i` belongs to `C_j` (requires
/// `|C_j| >= 2`), and `|C_j|/(|C_j|+1) * ||x_i - mu_j||^2` otherwise.
pub fn hartigan_distance(ds: &Dataset, p: &Partition, i: usize, j: usize) -> Result<f64> {
    let size = p.sizes()[j];
    if size == 0 {
        return Err(Error::EmptyCluster {
            cluster: j,
            iteration: None,
        });
    }
    let in_cluster = p.cluster_of(i) == j;
    if in_cluster && size < 2 {
        return Err(Error::invalid(
            "Hartigan weight is undefined for the current cluster of a singleton",
        ));
    }
    let cs = centroids(ds, p)?;
    let d2 = sq_dist(ds.data.row(i), cs.centers.row(j));
    let s = size as f64;
    let w = if in_cluster {
        s / (s - 1.0)
    } else {
        s / (s + 1.0)
    };
    Ok(w * d2)
}

/// Hartigan's algorithm: sweep the samples, moving each to the cluster with
/// the smallest weighted distance whenever the move is a strict improvement;
/// stop after the first sweep that accepts no move.
///
/// Samples whose current cluster is a singleton are skipped, so clusters
/// never empty out. Centroids are updated by exact rank-1 mean updates after
/// each accepted move, with a full recomputation every 1024 moves to bound
/// floating-point drift.
pub fn hartigan_run(
    ds: &Dataset,
    init: Partition,
    cfg: &RunConfig,
) -> Result<(Partition, RunReport)> {
    cfg.validate()?;
    let mut p = init;
    let mut cs = centroids(ds, &p)?; // rejects empty initial clusters
    let k = p.k();
    let n = ds.n();

    let mut trajectory = vec![kmeans_loss(ds, &p)?];
    let mut moves_per_sweep = Vec::new();
    let mut converged = false;
    let mut iterations = 0usize;
    let mut moves_since_rebuild = 0usize;

    let base_order: Vec<usize> = (0..n).collect();
    let mut order_rng = match cfg.sweep_order {
        SweepOrder::Fixed => None,
        SweepOrder::Shuffled { seed } => Some(SplitMix64::new(seed)),
    };

    for sweep in 1..=cfg.max_iters {
        let order: Vec<usize> = match order_rng.as_mut() {
            None => base_order.clone(),
            Some(rng) => {
                let mut o = base_order.clone();
                rng.shuffle(&mut o);
                o
            }
        };

        let mut moves = 0usize;
        for &i in &order {
            let m = p.cluster_of(i);
            let size_m = p.sizes()[m];
            if size_m < 2 {
                continue;
            }
            let xi = ds.data.row(i);
            let sm = size_m as f64;
            let delta_cur = sm / (sm - 1.0) * sq_dist(xi, cs.centers.row(m));

            let mut best_j = m;
            let mut best = f64::INFINITY;
            for j in 0..k {
                if j == m {
                    continue;
                }
                let sj = p.sizes()[j] as f64;
                let delta = sj / (sj + 1.0) * sq_dist(xi, cs.centers.row(j));
                if delta < best {
                    best = delta;
                    best_j = j;
                }
            }

            if best_j != m && best < delta_cur {
                // Exact rank-1 mean updates for the two touched clusters.
                let sj = p.sizes()[best_j] as f64;
                for c in 0..ds.dim() {
                    cs.centers[[m, c]] = (cs.centers[[m, c]] * sm - xi[c]) / (sm - 1.0);
                    cs.centers[[best_j, c]] = (cs.centers[[best_j, c]] * sj + xi[c]) / (sj + 1.0);
                }
                p.relocate(i, best_j);
                moves += 1;
                moves_since_rebuild += 1;
                if moves_since_rebuild >= 1024 {
                    cs = centroids_allow_empty(ds, &p);
                    moves_since_rebuild = 0;
                }
            }
        }

        iterations = sweep;
        moves_per_sweep.push(moves);
        cs = centroids_allow_empty(ds, &p);
        trajectory.push(kmeans_loss(ds, &p)?);
        if moves == 0 {
            converged = true;
            break;
        }
    }

    Ok((
        p,
        RunReport {
            iterations,
            loss_trajectory: trajectory,
            moves_per_sweep,
            empty_cluster_events: 0,
            converged,
        },
    ))
}

/// Uniformly random balanced assignment: cluster sizes differ by at most
/// one, and every assignment with those size constraints is equally likely.
pub fn init_random_partition(n: usize, k: usize, seed: u64) -> Result<Partition> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "need 1 <= K <= n, got K = {k}, n = {n}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let base = n / k;
    let extra = n % k;
    let mut clusters: Vec<usize> = (0..k).collect();
    rng.shuffle(&mut clusters);
    let mut counts = vec![base; k];
    for &c in clusters.iter().take(extra) {
        counts[c] += 1;
    }
    let mut labels = Vec::with_capacity(n);
    for (c, &count) in counts.iter().enumerate() {
        labels.extend(std::iter::repeat_n(c, count));
    }
    rng.shuffle(&mut labels);
    Partition::new(labels, k)
}

/// Designates `k` distinct sample rows as centers, uniformly without
/// replacement.
pub fn init_random_centers(ds: &Dataset, k: usize, seed: u64) -> Result<CentroidSet> {
    let n = ds.n();
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "need 1 <= K <= n, got K = {k}, n = {n}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + rng.next_below((n - i) as u64) as usize;
        idx.swap(i, j);
    }
    let mut centers = Array2::zeros((k, ds.dim()));
    for (row, &i) in idx.iter().take(k).enumerate() {
        centers.row_mut(row).assign(&ds.data.row(i));
    }
    Ok(CentroidSet {
        centers,
        sizes: vec![0; k],
    })
}

/// k-means++ seeding: the first center is uniform, each next center is a
/// sample drawn with probability proportional to its squared distance to
/// the nearest center chosen so far.
pub fn init_kmeanspp(ds: &Dataset, k: usize, seed: u64) -> Result<CentroidSet> {
    let n = ds.n();
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "need 1 <= K <= n, got K = {k}, n = {n}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut chosen = Vec::with_capacity(k);
    chosen.push(rng.next_below(n as u64) as usize);

    let mut d2: Vec<f64> = (0..n)
        .map(|i| sq_dist(ds.data.row(i), ds.data.row(chosen[0])))
        .collect();

    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::invalid(
                "k-means++ needs at least K distinct points, all remaining points coincide with chosen centers",
            ));
        }
        let u = rng.next_f64() * total;
        let mut acc = 0.0;
        let mut pick = None;
        for (i, &w) in d2.iter().enumerate() {
            acc += w;
            if acc > u {
                pick = Some(i);
                break;
            }
        }
        // Rounding in the cumulative sum can leave u unmatched; fall back to
        // the last point with positive mass.
        let pick = pick.unwrap_or_else(|| d2.iter().rposition(|&w| w > 0.0).unwrap());
        chosen.push(pick);
        for (i, slot) in d2.iter_mut().enumerate() {
            let d = sq_dist(ds.data.row(i), ds.data.row(pick));
            if d < *slot {
                *slot = d;
            }
        }
    }

    let mut centers = Array2::zeros((k, ds.dim()));
    for (row, &i) in chosen.iter().enumerate() {
        centers.row_mut(row).assign(&ds.data.row(i));
    }
    Ok(CentroidSet {
        centers,
        sizes: vec![0; k],
    })
}

/// Partition induced by assigning every sample to its nearest center
/// (lowest index on ties). If that leaves empty clusters, each is repaired
/// deterministically by moving, from the largest cluster, the member
/// farthest from its centroid.
pub fn partition_from_centers(ds: &Dataset, cs: &CentroidSet) -> Result<Partition> {
    let k = cs.k();
    if k == 0 || k > ds.n() {
        return Err(Error::invalid("need 1 <= K <= n centers"));
    }
    let assign: Vec<usize> = (0..ds.n())
        .map(|i| assign_one(ds.data.row(i), &cs.centers, None, 0.0))
        .collect();
    let mut p = Partition::new(assign, k)?;
    while let Some(empty) = p.sizes().iter().position(|&s| s == 0) {
        let donor = (0..k)
            .max_by_key(|&j| (p.sizes()[j], std::cmp::Reverse(j)))
            .unwrap();
        let cs_now = centroids_allow_empty(ds, &p);
        let (victim, _) = p
            .members(donor)
            .map(|i| (i, sq_dist(ds.data.row(i), cs_now.centers.row(donor))))
            .fold((usize::MAX, f64::NEG_INFINITY), |acc, (i, d)| {
                if d > acc.1 {
                    (i, d)
                } else {
                    acc
                }
            });
        p.relocate(victim, empty);
    }
    Ok(p)
}

/// True iff one Lloyd assignment step (ties keep the current label) leaves
/// the partition unchanged.
pub fn is_lloyd_fixed_point(ds: &Dataset, p: &Partition, tie_epsilon: f64) -> Result<bool> {
    let cs = centroids(ds, p)?;
    for i in 0..ds.n() {
        let next = assign_one(
            ds.data.row(i),
            &cs.centers,
            Some(p.cluster_of(i)),
            tie_epsilon,
        );
        if next != p.cluster_of(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff no sample in a non-singleton cluster has a strictly smaller
/// Hartigan weighted distance to another cluster.
pub fn is_hartigan_fixed_point(ds: &Dataset, p: &Partition) -> Result<bool> {
    let cs = centroids(ds, p)?;
    for i in 0..ds.n() {
        let m = p.cluster_of(i);
        let size_m = p.sizes()[m] as f64;
        if size_m < 2.0 {
            continue;
        }
        let xi = ds.data.row(i);
        let delta_cur = size_m / (size_m - 1.0) * sq_dist(xi, cs.centers.row(m));
        for j in 0..p.k() {
            if j == m {
                continue;
            }
            let sj = p.sizes()[j] as f64;
            if sj / (sj + 1.0) * sq_dist(xi, cs.centers.row(j)) < delta_cur {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Fixed start seed for the power iteration, so PCA is a pure function of
/// the data.
const POWER_ITERATION_SEED: u64 = 0x9E37_79B9_7F4A_7C15;
const POWER_ITERATION_MAX_ITERS: usize = 10_000;
/// Chord-length convergence threshold between successive unit directions
/// (equals the angle up to third order for small angles).
const POWER_ITERATION_TOL: f64 = 1e-10;

fn centered(ds: &Dataset) -> (Array2<f64>, Array1<f64>) {
    let n = ds.n() as f64;
    let mean = ds.data.sum_axis(ndarray::Axis(0)) / n;
    let mut b = ds.data.clone();
    for mut row in b.rows_mut() {
        row -= &mean;
    }
    (b, mean)
}

fn power_iteration(b: &Array2<f64>, seed: u64) -> Result<Array1<f64>> {
    let d = b.ncols();
    let mut rng = SplitMix64::new(seed);
    let mut v = Array1::from_shape_fn(d, |_| rng.next_gaussian());
    let norm = v.dot(&v).sqrt();
    v /= norm;

    for _ in 0..POWER_ITERATION_MAX_ITERS {
        let bv = b.dot(&v);
        let mut w = b.t().dot(&bv);
        let wn = w.dot(&w).sqrt();
        if wn == 0.0 {
            return Err(Error::invalid(
                "zero-variance data: power iteration collapsed",
            ));
        }
        w /= wn;
        let chord_plus: f64 = w.iter().zip(v.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
        let chord_minus: f64 = w.iter().zip(v.iter()).map(|(a, b)| (a + b) * (a + b)).sum();
        let chord = chord_plus.min(chord_minus).sqrt();
        v = w;
        if chord < POWER_ITERATION_TOL {
            break;
        }
    }
    Ok(v)
}

/// Unit top eigenvector of the centered covariance, by seeded power
/// iteration. The sign is deterministic but otherwise arbitrary.
pub fn pca_first_component(ds: &Dataset) -> Result<Array1<f64>> {
    if ds.n() < 2 {
        return Err(Error::invalid("PCA needs at least 2 samples"));
    }
    let (b, _) = centered(ds);
    if b.iter().all(|&x| x == 0.0) {
        return Err(Error::invalid("zero-variance data: all samples identical"));
    }
    power_iteration(&b, POWER_ITERATION_SEED)
}

/// Splits the samples by the sign of their first principal component score.
/// Scores <= 0 (including exact zeros) go to cluster 0.
pub fn pca_split(ds: &Dataset) -> Result<Partition> {
    let v = pca_first_component(ds)?;
    let (b, _) = centered(ds);
    let scores = b.dot(&v);
    let assign: Vec<usize> = scores.iter().map(|&s| usize::from(s > 0.0)).collect();
    Partition::new(assign, 2)
}

/// Projects the data onto its top `r` principal directions (deflated power
/// iteration with re-orthogonalization). Scores are taken against the
/// original centered data.
pub fn pca_reduce(ds: &Dataset, r: usize) -> Result<Dataset> {
    let limit = ds.n().min(ds.dim());
    if r == 0 || r > limit {
        return Err(Error::invalid(format!(
            "reduced dimension must satisfy 1 <= r <= min(n, d) = {limit}, got {r}"
        )));
    }
    if ds.n() < 2 {
        return Err(Error::invalid("PCA needs at least 2 samples"));
    }
    let (b, _) = centered(ds);
    if b.iter().all(|&x| x == 0.0) {
        return Err(Error::invalid("zero-variance data: all samples identical"));
    }

    let mut components: Vec<Array1<f64>> = Vec::with_capacity(r);
    let mut deflated = b.clone();
    for c in 0..r {
        let mut v = power_iteration(&deflated, POWER_ITERATION_SEED.wrapping_add(c as u64))?;
        // Two Gram-Schmidt passes against the accepted components.
        for _ in 0..2 {
            for u in &components {
                let proj = v.dot(u);
                v.scaled_add(-proj, u);
            }
        }
        let norm = v.dot(&v).sqrt();
        if norm == 0.0 {
            return Err(Error::invalid(format!(
                "data has rank below the requested {r} components"
            )));
        }
        v /= norm;
        let scores = deflated.dot(&v);
        for (i, mut row) in deflated.rows_mut().into_iter().enumerate() {
            row.scaled_add(-scores[i], &v);
        }
        components.push(v);
    }

    let mut reduced = Array2::zeros((ds.n(), r));
    for (c, v) in components.iter().enumerate() {
        let scores = b.dot(v);
        for i in 0..ds.n() {
            reduced[[i, c]] = scores[i];
        }
    }
    Ok(Dataset {
        data: reduced,
        labels: ds.labels.clone(),
        spec: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{sample_gmm, GmmSpec};

    fn dataset_1d(points: &[f64]) -> Dataset {
        let data = Array2::from_shape_vec((points.len(), 1), points.to_vec()).unwrap();
        Dataset::new(data)
    }

    fn part(assign: &[usize], k: usize) -> Partition {
        Partition::new(assign.to_vec(), k).unwrap()
    }

    #[test]
    fn loss_two_point_cluster() {
        let ds = dataset_1d(&[0.0, 2.0]);
        let p = part(&[0, 0], 1);
        assert_eq!(kmeans_loss(&ds, &p).unwrap(), 2.0);
    }

    #[test]
    fn loss_singleton_clusters_is_zero() {
        let ds = dataset_1d(&[3.0, -1.0, 7.0]);
        let p = part(&[0, 1, 2], 3);
        assert_eq!(kmeans_loss(&ds, &p).unwrap(), 0.0);
    }

    #[test]
    fn loss_two_two_point_clusters() {
        let ds = dataset_1d(&[0.0, 1.0, 10.0, 11.0]);
        let p = part(&[0, 0, 1, 1], 2);
        assert_eq!(kmeans_loss(&ds, &p).unwrap(), 1.0);
    }

    #[test]
    fn loss_rejects_empty_cluster() {
        let ds = dataset_1d(&[0.0, 1.0]);
        let p = part(&[0, 0], 2);
        assert!(matches!(
            kmeans_loss(&ds, &p),
            Err(Error::EmptyCluster { cluster: 1, .. })
        ));
    }

    #[test]
    fn centroid_examples() {
        let ds = dataset_1d(&[0.0, 2.0]);
        let cs = centroids(&ds, &part(&[0, 0], 1)).unwrap();
        assert_eq!(cs.centers[[0, 0]], 1.0);

        let cs = centroids(&ds, &part(&[0, 1], 2)).unwrap();
        assert_eq!(cs.centers[[0, 0]], 0.0);
        assert_eq!(cs.centers[[1, 0]], 2.0);
    }

    #[test]
    fn centroid_of_everything_matches_column_means() {
        let spec = GmmSpec::balanced(2, 3, 1.0, 1.0, 3, 33);
        let ds = sample_gmm(&spec).unwrap();
        let n = ds.n();
        let cs = centroids(&ds, &part(&vec![0; n], 1)).unwrap();
        for j in 0..3 {
            let mean: f64 = (0..n).map(|i| ds.data[[i, j]]).sum::<f64>() / n as f64;
            assert!((cs.centers[[0, j]] - mean).abs() < 1e-12);
        }
    }

    #[test]
    fn lloyd_hand_simulated_run() {
        // Points {0, 1, 10, 11}, init {0,10}/{1,11}. Step 1 moves point 1
        // left and point 10 right (centroids 5 and 6); step 2 confirms.
        let ds = dataset_1d(&[0.0, 1.0, 10.0, 11.0]);
        let init = part(&[0, 1, 0, 1], 2);
        let (p, report) =
            lloyd_run(&ds, LloydInit::Partition(init), &RunConfig::default()).unwrap();
        assert_eq!(p.assign(), &[0, 0, 1, 1]);
        assert!(report.converged);
        assert_eq!(report.iterations, 2);
        assert_eq!(report.loss_trajectory, vec![100.0, 1.0, 1.0]);
    }

    #[test]
    fn lloyd_fixed_point_returns_init_in_one_iteration() {
        let ds = dataset_1d(&[0.0, 1.0, 10.0, 11.0]);
        let init = part(&[0, 0, 1, 1], 2);
        let (p, report) = lloyd_run(
            &ds,
            LloydInit::Partition(init.clone()),
            &RunConfig::default(),
        )
        .unwrap();
        assert_eq!(p, init);
        assert!(report.converged);
        assert_eq!(report.iterations, 1);
        assert_eq!(report.loss_trajectory.len(), 2);
        assert_eq!(report.loss_trajectory[0], report.loss_trajectory[1]);
    }

    #[test]
    fn lloyd_center_init_recovers_zero_noise_mixture() {
        let spec = GmmSpec {
            k: 2,
            d: 4,
            tau_sq: 1.0,
            sigma_sq: 0.0,
            class_sizes: vec![3, 3],
            seed: 5,
        };
        let ds = sample_gmm(&spec).unwrap();
        // Two distinct data points equal to the two class means.
        let mut centers = Array2::zeros((2, 4));
        centers.row_mut(0).assign(&ds.data.row(0));
        centers.row_mut(1).assign(&ds.data.row(3));
        let cs = CentroidSet {
            centers,
            sizes: vec![0, 0],
        };
        let (p, report) = lloyd_run(&ds, LloydInit::Centers(cs), &RunConfig::default()).unwrap();
        assert!(crate::model::is_correct_partition(
            &p,
            ds.labels.as_ref().unwrap()
        ));
        assert!(report.converged);
        assert!(report.iterations <= 2);
        // Zero up to the rounding of averaging identical points.
        assert!(*report.loss_trajectory.last().unwrap() < 1e-20);
    }

    #[test]
    fn lloyd_abort_policy_reports_iteration() {
        // Far-apart singleton centers: one grabs everything on step 1.
        let ds = dataset_1d(&[0.0, 0.1, 0.2]);
        let mut centers = Array2::zeros((2, 1));
        centers[[0, 0]] = 0.1;
        centers[[1, 0]] = 100.0;
        let cfg = RunConfig {
            empty_cluster_policy: EmptyClusterPolicy::Abort,
            ..Default::default()
        };
        let err = lloyd_run(
            &ds,
            LloydInit::Centers(CentroidSet {
                centers,
                sizes: vec![0, 0],
            }),
            &cfg,
        )
        .unwrap_err();
        match err {
            Error::EmptyCluster {
                cluster: 1,
                iteration: Some(1),
            } => {}
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn lloyd_retain_policy_keeps_going() {
        let ds = dataset_1d(&[0.0, 0.1, 0.2]);
        let mut centers = Array2::zeros((2, 1));
        centers[[0, 0]] = 0.1;
        centers[[1, 0]] = 100.0;
        let (p, report) = lloyd_run(
            &ds,
            LloydInit::Centers(CentroidSet {
                centers,
                sizes: vec![0, 0],
            }),
            &RunConfig::default(),
        )
        .unwrap();
        assert_eq!(p.sizes(), &[3, 0]);
        assert!(report.converged);
        assert!(report.empty_cluster_events > 0);
    }

    #[test]
    fn hartigan_distance_examples() {
        let ds = dataset_1d(&[0.0, 1.0, 10.0, 11.0]);
        let p = part(&[0, 0, 1, 1], 2);
        let cur = hartigan_distance(&ds, &p, 0, 0).unwrap();
        let other = hartigan_distance(&ds, &p, 0, 1).unwrap();
        assert_eq!(cur, 0.5); // 2 * 0.5^2
        assert_eq!(other, 73.5); // (2/3) * 10.5^2
        assert!(cur <= other, "no move on this instance");
    }

    #[test]
    fn hartigan_distance_guards() {
        let ds = dataset_1d(&[0.0, 1.0, 5.0]);
        let p = part(&[0, 0, 1], 2);
        // Singleton current cluster.
        assert!(hartigan_distance(&ds, &p, 2, 1).is_err());
        // Empty target cluster.
        let p3 = part(&[0, 0, 1], 3);
        assert!(matches!(
            hartigan_distance(&ds, &p3, 0, 2),
            Err(Error::EmptyCluster { cluster: 2, .. })
        ));
    }

    #[test]
    fn hartigan_hand_simulated_run() {
        // Same instance as the Lloyd oracle. Sweep 1: point 0 moves over
        // (24 < 50), then point 11 moves back (0.5 < 73.5); sweep 2 is clean.
        let ds = dataset_1d(&[0.0, 1.0, 10.0, 11.0]);
        let init = part(&[0, 1, 0, 1], 2);
        let (p, report) = hartigan_run(&ds, init, &RunConfig::default()).unwrap();
        assert_eq!(p.assign(), &[1, 1, 0, 0]);
        assert!(report.converged);
        assert_eq!(report.moves_per_sweep, vec![2, 0]);
        assert_eq!(report.loss_trajectory, vec![100.0, 1.0, 1.0]);
    }

    #[test]
    fn hartigan_shuffled_sweeps_converge_and_repeat() {
        let spec = GmmSpec::balanced(2, 4, 1.0, 1.0, 8, 61);
        let ds = sample_gmm(&spec).unwrap();
        let init = init_random_partition(ds.n(), 2, 5).unwrap();
        let cfg = RunConfig {
            sweep_order: SweepOrder::Shuffled { seed: 42 },
            ..Default::default()
        };
        let (p1, r1) = hartigan_run(&ds, init.clone(), &cfg).unwrap();
        let (p2, r2) = hartigan_run(&ds, init, &cfg).unwrap();
        assert_eq!(p1, p2);
        assert_eq!(r1.moves_per_sweep, r2.moves_per_sweep);
        assert!(r1.converged);
        for w in r1.loss_trajectory.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn tie_epsilon_widens_the_keep_current_band() {
        let ds = dataset_1d(&[0.0, 1.0, 10.0, 11.0]);
        let p = part(&[0, 1, 0, 1], 2);
        assert!(!is_lloyd_fixed_point(&ds, &p, 0.0).unwrap());
        // A band wider than any distance gap freezes every assignment.
        assert!(is_lloyd_fixed_point(&ds, &p, 1e6).unwrap());
        let cfg = RunConfig {
            tie_epsilon: 1e6,
            ..Default::default()
        };
        let (out, report) = lloyd_run(&ds, LloydInit::Partition(p.clone()), &cfg).unwrap();
        assert_eq!(out, p);
        assert_eq!(report.iterations, 1);
    }

    #[test]
    fn hartigan_correct_init_accepts_no_move() {
        let ds = dataset_1d(&[0.0, 1.0, 10.0, 11.0]);
        let init = part(&[0, 0, 1, 1], 2);
        let (p, report) = hartigan_run(&ds, init.clone(), &RunConfig::default()).unwrap();
        assert_eq!(p, init);
        assert_eq!(report.moves_per_sweep, vec![0]);
        assert_eq!(report.iterations, 1);
    }

    #[test]
    fn hartigan_accepted_moves_strictly_decrease_loss() {
        // Brute-force oracle: recompute the exact loss before and after
        // every single accepted relocation.
        let mut rng = SplitMix64::new(404);
        for trial in 0..30 {
            let spec = GmmSpec {
                k: 2,
                d: 1 + (trial % 5),
                tau_sq: 1.0,
                sigma_sq: 2.0,
                class_sizes: vec![4, 4],
                seed: rng.next_u64(),
            };
            let ds = sample_gmm(&spec).unwrap();
            let mut p = init_random_partition(ds.n(), 2, rng.next_u64()).unwrap();
            if p.has_empty_cluster() {
                continue;
            }
            // One manual sweep with the same acceptance rule.
            for i in 0..ds.n() {
                let m = p.cluster_of(i);
                if p.sizes()[m] < 2 {
                    continue;
                }
                let other = 1 - m;
                let cur = hartigan_distance(&ds, &p, i, m).unwrap();
                let alt = hartigan_distance(&ds, &p, i, other).unwrap();
                if alt < cur {
                    let before = kmeans_loss(&ds, &p).unwrap();
                    p.relocate(i, other);
                    let after = kmeans_loss(&ds, &p).unwrap();
                    assert!(after < before, "move accepted but loss {before} -> {after}");
                }
            }
        }
    }

    #[test]
    fn hartigan_fixed_points_are_single_move_optima() {
        // On exhaustive enumeration of a small instance, every Hartigan
        // fixed point admits no loss-decreasing single-sample move.
        let spec = GmmSpec {
            k: 2,
            d: 2,
            tau_sq: 1.0,
            sigma_sq: 4.0,
            class_sizes: vec![4, 4],
            seed: 17,
        };
        let ds = sample_gmm(&spec).unwrap();
        let mut checked = 0;
        for p in crate::model::BipartitionIter::new(8, true).unwrap() {
            if !is_hartigan_fixed_point(&ds, &p).unwrap() {
                continue;
            }
            checked += 1;
            let base = kmeans_loss(&ds, &p).unwrap();
            for i in 0..8 {
                let m = p.cluster_of(i);
                if p.sizes()[m] < 2 {
                    continue;
                }
                let mut q = p.clone();
                q.relocate(i, 1 - m);
                let moved = kmeans_loss(&ds, &q).unwrap();
                assert!(
                    moved >= base - 1e-9,
                    "fixed point admits improving move: {base} -> {moved}"
                );
            }
        }
        assert!(checked > 0, "no fixed points found at all");
    }

    #[test]
    fn random_partition_is_balanced_and_seeded() {
        let p = init_random_partition(4, 2, 9).unwrap();
        assert_eq!(p.sizes(), &[2, 2]);
        let p = init_random_partition(5, 2, 9).unwrap();
        let mut sizes = p.sizes().to_vec();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 3]);
        assert_eq!(
            init_random_partition(10, 3, 1).unwrap().assign(),
            init_random_partition(10, 3, 1).unwrap().assign()
        );
    }

    #[test]
    fn random_partition_is_uniform_over_balanced_assignments() {
        // n = 4, K = 2: six balanced assignments, chi-square against
        // uniform over 10^4 seeds (5 dof, generous critical value).
        let mut counts = std::collections::HashMap::new();
        let trials = 10_000;
        for seed in 0..trials {
            let p = init_random_partition(4, 2, seed).unwrap();
            *counts.entry(p.assign().to_vec()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 6);
        let expected = trials as f64 / 6.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 25.0, "chi-square statistic {chi2}");
    }

    #[test]
    fn random_centers_are_distinct_rows() {
        let spec = GmmSpec::balanced(2, 3, 1.0, 1.0, 4, 2);
        let ds = sample_gmm(&spec).unwrap();
        let cs = init_random_centers(&ds, 8, 3).unwrap();
        assert_eq!(cs.k(), 8); // K = n: every point is a center
        let cs = init_random_centers(&ds, 1, 3).unwrap();
        assert_eq!(cs.k(), 1);
        let a = init_random_centers(&ds, 3, 77).unwrap();
        let b = init_random_centers(&ds, 3, 77).unwrap();
        assert_eq!(a.centers, b.centers);
    }

    #[test]
    fn kmeanspp_zero_noise_picks_both_clusters() {
        let spec = GmmSpec {
            k: 2,
            d: 3,
            tau_sq: 1.0,
            sigma_sq: 0.0,
            class_sizes: vec![3, 3],
            seed: 8,
        };
        let ds = sample_gmm(&spec).unwrap();
        for seed in 0..40 {
            let cs = init_kmeanspp(&ds, 2, seed).unwrap();
            // The two centers must be the two distinct class means.
            assert!(sq_dist(cs.centers.row(0), cs.centers.row(1)) > 0.0);
        }
    }

    #[test]
    fn kmeanspp_weights_follow_squared_distance() {
        let ds = dataset_1d(&[0.0, 1.0, 10.0]);
        // Conditional on the first center being point 0, the second center
        // is point 2 with probability 100/101.
        let mut first0 = 0usize;
        let mut picked_far = 0usize;
        for seed in 0..3000 {
            let cs = init_kmeanspp(&ds, 2, seed).unwrap();
            if cs.centers[[0, 0]] == 0.0 {
                first0 += 1;
                if cs.centers[[1, 0]] == 10.0 {
                    picked_far += 1;
                }
            }
        }
        assert!(first0 > 500, "first0 = {first0}");
        let ratio = picked_far as f64 / first0 as f64;
        assert!(ratio > 0.95, "far-point ratio {ratio}");
    }

    #[test]
    fn kmeanspp_rejects_all_identical_points() {
        let ds = dataset_1d(&[3.0, 3.0, 3.0]);
        assert!(init_kmeanspp(&ds, 2, 1).is_err());
        assert!(init_kmeanspp(&ds, 1, 1).is_ok());
    }

    #[test]
    fn lloyd_fixed_point_predicate_examples() {
        let ds = dataset_1d(&[0.0, 1.0, 10.0, 11.0]);
        assert!(is_lloyd_fixed_point(&ds, &part(&[0, 0, 1, 1], 2), 0.0).unwrap());
        assert!(!is_lloyd_fixed_point(&ds, &part(&[0, 1, 0, 1], 2), 0.0).unwrap());
    }

    #[test]
    fn hartigan_fixed_point_predicate_examples() {
        let ds = dataset_1d(&[0.0, 1.0, 10.0, 11.0]);
        assert!(is_hartigan_fixed_point(&ds, &part(&[0, 0, 1, 1], 2)).unwrap());
        assert!(!is_hartigan_fixed_point(&ds, &part(&[0, 1, 0, 1], 2)).unwrap());
    }

    #[test]
    fn lloyd_predicate_agrees_with_one_iteration_run() {
        let mut rng = SplitMix64::new(2024);
        for _ in 0..40 {
            let spec = GmmSpec {
                k: 2,
                d: 3,
                tau_sq: 1.0,
                sigma_sq: 5.0,
                class_sizes: vec![5, 5],
                seed: rng.next_u64(),
            };
            let ds = sample_gmm(&spec).unwrap();
            let p = init_random_partition(10, 2, rng.next_u64()).unwrap();
            if p.has_empty_cluster() {
                continue;
            }
            let fixed = is_lloyd_fixed_point(&ds, &p, 0.0).unwrap();
            let (out, report) =
                lloyd_run(&ds, LloydInit::Partition(p.clone()), &RunConfig::default()).unwrap();
            let one_step_identity = report.iterations == 1 && report.converged && out == p;
            assert_eq!(fixed, one_step_identity);
        }
    }

    #[test]
    fn single_swap_partitions_are_lloyd_fixed_in_high_dimension() {
        // Swapping one sample into the wrong cluster of high-dimensional,
        // high-noise data almost never gets repaired: the empirical
        // fixed-point frequency dominates 1 - rho^{d/4}.
        let n = 16;
        let d = 2048;
        let sigma = crate::theory::sigma_balanced(1.5, n as f64, 2.0);
        let trials = 200;
        let mut fixed = 0;
        for seed in 0..trials {
            let spec = GmmSpec {
                k: 2,
                d,
                tau_sq: 1.0,
                sigma_sq: sigma * sigma,
                class_sizes: vec![n / 2, n / 2],
                seed,
            };
            let ds = sample_gmm(&spec).unwrap();
            let mut assign = ds.labels.clone().unwrap();
            assign[0] = 1; // single misclassified sample
            let p = Partition::new(assign, 2).unwrap();
            if is_lloyd_fixed_point(&ds, &p, 0.0).unwrap() {
                fixed += 1;
            }
        }
        let inputs =
            crate::theory::LloydBoundInputs::new(1.0, sigma * sigma, n / 2 + 1, n / 2 - 1).unwrap();
        let rho = crate::theory::lloyd_rho(&inputs).unwrap();
        let bound = rho.powf(d as f64 / 4.0);
        let freq = fixed as f64 / trials as f64;
        assert!(
            freq >= 1.0 - bound,
            "freq {freq}, bound floor {}",
            1.0 - bound
        );
    }

    #[test]
    fn pca_recovers_rank_one_direction() {
        // x_i = t_i * v for a fixed unit vector v.
        let v = [0.6, 0.0, 0.8];
        let ts = [-2.0, -0.5, 0.3, 1.7, 2.5];
        let mut data = Array2::zeros((5, 3));
        for (i, &t) in ts.iter().enumerate() {
            for j in 0..3 {
                data[[i, j]] = t * v[j];
            }
        }
        let got = pca_first_component(&Dataset::new(data)).unwrap();
        let cos: f64 = got.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        assert!((cos.abs() - 1.0).abs() < 1e-10, "cos {cos}");
    }

    #[test]
    fn pca_two_point_axis() {
        let mut data = Array2::zeros((2, 3));
        data[[0, 0]] = -1.0;
        data[[1, 0]] = 1.0;
        let got = pca_first_component(&Dataset::new(data)).unwrap();
        assert!((got[0].abs() - 1.0).abs() < 1e-10);
        assert!(got[1].abs() < 1e-10 && got[2].abs() < 1e-10);
    }

    #[test]
    fn pca_errors_on_degenerate_input() {
        assert!(pca_first_component(&dataset_1d(&[5.0])).is_err());
        assert!(pca_first_component(&dataset_1d(&[2.0, 2.0, 2.0])).is_err());
    }

    /// Cyclic Jacobi eigendecomposition of a symmetric matrix; returns
    /// eigenvalues descending with matching eigenvectors as columns.
    fn jacobi_eigen(mut a: Array2<f64>) -> (Vec<f64>, Array2<f64>) {
        let d = a.nrows();
        let mut v = Array2::eye(d);
        for _ in 0..100 {
            let mut off = 0.0;
            for p in 0..d {
                for q in (p + 1)..d {
                    off += a[[p, q]] * a[[p, q]];
                }
            }
            if off < 1e-24 {
                break;
            }
            for p in 0..d {
                for q in (p + 1)..d {
                    if a[[p, q]].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * a[[p, q]]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for i in 0..d {
                        let (aip, aiq) = (a[[i, p]], a[[i, q]]);
                        a[[i, p]] = c * aip - s * aiq;
                        a[[i, q]] = s * aip + c * aiq;
                    }
                    for i in 0..d {
                        let (api, aqi) = (a[[p, i]], a[[q, i]]);
                        a[[p, i]] = c * api - s * aqi;
                        a[[q, i]] = s * api + c * aqi;
                    }
                    for i in 0..d {
                        let (vip, viq) = (v[[i, p]], v[[i, q]]);
                        v[[i, p]] = c * vip - s * viq;
                        v[[i, q]] = s * vip + c * viq;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&i, &j| a[[j, j]].partial_cmp(&a[[i, i]]).unwrap());
        let evals: Vec<f64> = order.iter().map(|&i| a[[i, i]]).collect();
        let mut evecs = Array2::zeros((d, d));
        for (col, &i) in order.iter().enumerate() {
            for r in 0..d {
                evecs[[r, col]] = v[[r, i]];
            }
        }
        (evals, evecs)
    }

    fn scatter_matrix(ds: &Dataset) -> Array2<f64> {
        let (b, _) = centered(ds);
        b.t().dot(&b)
    }

    #[test]
    fn pca_matches_dense_eigensolver_on_spiked_data() {
        // Strong planted spike so the eigengap is clear.
        let d = 30;
        let n = 80;
        let mut rng = SplitMix64::new(91);
        let spike: Vec<f64> = (0..d).map(|_| rng.next_gaussian()).collect();
        let spike_norm: f64 = spike.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut data = Array2::zeros((n, d));
        for i in 0..n {
            let t = 6.0 * rng.next_gaussian();
            for j in 0..d {
                data[[i, j]] = t * spike[j] / spike_norm + rng.next_gaussian();
            }
        }
        let ds = Dataset::new(data);
        let ours = pca_first_component(&ds).unwrap();
        let (_, evecs) = jacobi_eigen(scatter_matrix(&ds));
        let cos: f64 = (0..d).map(|j| ours[j] * evecs[[j, 0]]).sum();
        assert!((cos.abs() - 1.0).abs() < 1e-6, "cos {cos}");
    }

    #[test]
    fn pca_reduce_full_rank_preserves_pairwise_distances() {
        let spec = GmmSpec::balanced(2, 6, 1.0, 1.0, 20, 3);
        let ds = sample_gmm(&spec).unwrap();
        let red = pca_reduce(&ds, 6).unwrap();
        for i in 0..ds.n() {
            for j in (i + 1)..ds.n() {
                let orig = sq_dist(ds.data.row(i), ds.data.row(j));
                let proj = sq_dist(red.data.row(i), red.data.row(j));
                assert!((orig - proj).abs() < 1e-8, "({i},{j}): {orig} vs {proj}");
            }
        }
    }

    #[test]
    fn pca_reduce_first_column_matches_first_component() {
        let spec = GmmSpec::balanced(2, 5, 1.0, 0.5, 10, 21);
        let ds = sample_gmm(&spec).unwrap();
        let red = pca_reduce(&ds, 1).unwrap();
        let v = pca_first_component(&ds).unwrap();
        let (b, _) = centered(&ds);
        let scores = b.dot(&v);
        for i in 0..ds.n() {
            assert!((red.data[[i, 0]].abs() - scores[i].abs()).abs() < 1e-8);
        }
    }

    #[test]
    fn pca_component_variances_match_eigenvalues() {
        let spec = GmmSpec::balanced(3, 8, 2.0, 1.0, 15, 13);
        let ds = sample_gmm(&spec).unwrap();
        let r = 3;
        let red = pca_reduce(&ds, r).unwrap();
        let (evals, _) = jacobi_eigen(scatter_matrix(&ds));
        for (c, &eval) in evals.iter().take(r).enumerate() {
            let ss: f64 = (0..ds.n()).map(|i| red.data[[i, c]].powi(2)).sum();
            assert!(
                (ss - eval).abs() / eval < 1e-6,
                "component {c}: {ss} vs {eval}"
            );
        }
    }

    #[test]
    fn pca_reduce_rejects_bad_rank() {
        let spec = GmmSpec::balanced(2, 4, 1.0, 1.0, 3, 1);
        let ds = sample_gmm(&spec).unwrap();
        assert!(pca_reduce(&ds, 0).is_err());
        assert!(pca_reduce(&ds, 5).is_err());
    }

    #[test]
    fn pca_split_examples() {
        // Two points in 1-D: two singletons.
        let ds = dataset_1d(&[-1.0, 1.0]);
        let p = pca_split(&ds).unwrap();
        assert_eq!(p.sizes(), &[1, 1]);

        // Zero-noise mixture: exact recovery.
        let spec = GmmSpec {
            k: 2,
            d: 6,
            tau_sq: 1.0,
            sigma_sq: 0.0,
            class_sizes: vec![4, 4],
            seed: 44,
        };
        let ds = sample_gmm(&spec).unwrap();
        let p = pca_split(&ds).unwrap();
        assert!(crate::model::is_correct_partition(
            &p,
            ds.labels.as_ref().unwrap()
        ));
    }

    #[test]
    fn pca_split_is_invariant_to_component_sign() {
        let spec = GmmSpec::balanced(2, 4, 1.0, 0.2, 6, 77);
        let ds = sample_gmm(&spec).unwrap();
        let v = pca_first_component(&ds).unwrap();
        let (b, _) = centered(&ds);
        let scores = b.dot(&v);
        let direct: Vec<usize> = scores.iter().map(|&s| usize::from(s > 0.0)).collect();
        let flipped: Vec<usize> = scores.iter().map(|&s| usize::from(-s > 0.0)).collect();
        // Same split up to swapping the two labels (strict zeros aside,
        // which this data does not produce).
        let agree_swapped = direct.iter().zip(&flipped).all(|(&a, &b)| a == 1 - b);
        assert!(agree_swapped);
    }

    #[test]
    fn partition_from_centers_repairs_empty_clusters() {
        let ds = dataset_1d(&[0.0, 1.0, 2.0, 3.0]);
        let mut centers = Array2::zeros((2, 1));
        centers[[0, 0]] = 1.5;
        centers[[1, 0]] = 50.0;
        let p = partition_from_centers(
            &ds,
            &CentroidSet {
                centers,
                sizes: vec![0, 0],
            },
        )
        .unwrap();
        assert!(!p.has_empty_cluster());
        assert_eq!(p.n(), 4);
    }
}
