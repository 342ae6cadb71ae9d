//! Generative model, partitions, ground-truth bookkeeping, partition
//! enumeration, and dataset ingestion.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Default cap on `n` for exhaustive bipartition enumeration.
pub const ENUMERATION_GUARD: usize = 30;

/// Parameters of the isotropic Gaussian mixture: `K` class centers drawn
/// i.i.d. from `N(0, tau_sq * I_d)`, each sample equal to its class center
/// plus `N(0, sigma_sq * I_d)` noise.
///
/// Class sizes are fixed and classes are laid out contiguously in sample
/// order; `seed` fully determines the dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GmmSpec {
    #[serde(rename = "K")]
    pub k: usize,
    pub d: usize,
    pub tau_sq: f64,
    pub sigma_sq: f64,
    pub class_sizes: Vec<usize>,
    pub seed: u64,
}

impl GmmSpec {
    /// Spec with equal class sizes.
    pub fn balanced(
        k: usize,
        d: usize,
        tau_sq: f64,
        sigma_sq: f64,
        per_class: usize,
        seed: u64,
    ) -> Self {
        GmmSpec {
            k,
            d,
            tau_sq,
            sigma_sq,
            class_sizes: vec![per_class; k],
            seed,
        }
    }

    pub fn n(&self) -> usize {
        self.class_sizes.iter().sum()
    }

    /// Checks the structural invariants. Variances may be zero (degenerate
    /// mixtures are useful fixtures) but never negative or non-finite.
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::invalid(format!("K must be >= 2, got {}", self.k)));
        }
        if self.d == 0 {
            return Err(Error::invalid("d must be >= 1"));
        }
        if self.class_sizes.len() != self.k {
            return Err(Error::invalid(format!(
                "class_sizes has {} entries but K = {}",
                self.class_sizes.len(),
                self.k
            )));
        }
        if self.class_sizes.contains(&0) {
            return Err(Error::invalid("every class size must be >= 1"));
        }
        for (name, v) in [("tau_sq", self.tau_sq), ("sigma_sq", self.sigma_sq)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// An `n x d` dataset with optional ground-truth class labels and the spec
/// that generated it.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub data: Array2<f64>,
    pub labels: Option<Vec<usize>>,
    pub spec: Option<GmmSpec>,
}

impl Dataset {
    pub fn new(data: Array2<f64>) -> Self {
        Dataset {
            data,
            labels: None,
            spec: None,
        }
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn dim(&self) -> usize {
        self.data.ncols()
    }

    /// Number of ground-truth classes (max label + 1), if labels are present.
    pub fn n_classes(&self) -> Option<usize> {
        self.labels
            .as_ref()
            .map(|l| l.iter().max().map_or(0, |m| m + 1))
    }
}

/// A cluster assignment over `[n]` with cached cluster sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assign: Vec<usize>,
    sizes: Vec<usize>,
}

impl Partition {
    /// Builds a partition from an assignment vector; cluster indices must be
    /// in `0..k`.
    pub fn new(assign: Vec<usize>, k: usize) -> Result<Self> {
        let mut sizes = vec![0usize; k];
        for &a in &assign {
            if a >= k {
                return Err(Error::invalid(format!(
                    "cluster index {a} out of range for K = {k}"
                )));
            }
            sizes[a] += 1;
        }
        Ok(Partition { assign, sizes })
    }

    pub fn assign(&self) -> &[usize] {
        &self.assign
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.assign.len()
    }

    pub fn cluster_of(&self, i: usize) -> usize {
        self.assign[i]
    }

    /// Members of cluster `j` in ascending sample order.
    pub fn members(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.assign
            .iter()
            .enumerate()
            .filter(move |(_, &a)| a == j)
            .map(|(i, _)| i)
    }

    pub fn has_empty_cluster(&self) -> bool {
        self.sizes.contains(&0)
    }

    /// Moves sample `i` to cluster `to`, keeping the size cache in sync.
    pub fn relocate(&mut self, i: usize, to: usize) {
        let from = self.assign[i];
        if from != to {
            self.sizes[from] -= 1;
            self.sizes[to] += 1;
            self.assign[i] = to;
        }
    }
}

/// Per-cluster class composition: `proportions[l]` is the fraction of
/// samples whose ground-truth class is `l`, `purity[j][l]` the fraction of
/// cluster `j` drawn from class `l` (`None` marks an empty cluster), and
/// `r_star` the smallest class proportion.
#[derive(Debug, Clone)]
pub struct PurityView {
    pub proportions: Vec<f64>,
    pub purity: Vec<Option<Vec<f64>>>,
    pub r_star: f64,
}

impl PurityView {
    /// Purity of cluster `j` with respect to class `l`; `None` if cluster
    /// `j` is empty.
    pub fn of(&self, j: usize, l: usize) -> Option<f64> {
        self.purity[j].as_ref().map(|row| row[l])
    }
}

/// Computes class proportions and cluster purities for a partition against
/// ground-truth labels. Rows for empty clusters are flagged rather than
/// filled with NaN.
pub fn purity_view(p: &Partition, labels: &[usize]) -> Result<PurityView> {
    if p.n() != labels.len() {
        return Err(Error::invalid(format!(
            "partition has {} samples but labels have {}",
            p.n(),
            labels.len()
        )));
    }
    if labels.is_empty() {
        return Err(Error::invalid("labels must be nonempty"));
    }
    let n_classes = labels.iter().max().unwrap() + 1;
    let k = p.k();
    let n = labels.len() as f64;

    let mut class_counts = vec![0usize; n_classes];
    let mut joint = vec![vec![0usize; n_classes]; k];
    for (i, &l) in labels.iter().enumerate() {
        class_counts[l] += 1;
        joint[p.cluster_of(i)][l] += 1;
    }

    let proportions: Vec<f64> = class_counts.iter().map(|&c| c as f64 / n).collect();
    let r_star = proportions.iter().cloned().fold(f64::INFINITY, f64::min);
    let purity = (0..k)
        .map(|j| {
            let size = p.sizes()[j];
            if size == 0 {
                None
            } else {
                Some(joint[j].iter().map(|&c| c as f64 / size as f64).collect())
            }
        })
        .collect();

    Ok(PurityView {
        proportions,
        purity,
        r_star,
    })
}

/// True iff some permutation of cluster indices maps the assignment onto the
/// ground-truth labels exactly.
pub fn is_correct_partition(p: &Partition, labels: &[usize]) -> bool {
    debug_assert_eq!(p.n(), labels.len());
    let k = p.k();
    // cluster -> class mapping must be well-defined and injective.
    let mut map = vec![usize::MAX; k];
    let mut hit = vec![false; k];
    for (i, &l) in labels.iter().enumerate() {
        let j = p.cluster_of(i);
        if l >= k {
            return false;
        }
        if map[j] == usize::MAX {
            if hit[l] {
                return false; // two clusters claim the same class
            }
            map[j] = l;
            hit[l] = true;
        } else if map[j] != l {
            return false;
        }
    }
    true
}

/// True iff both clusters of a bipartition have more than 2 members and
/// sizes strictly inside `n/2 +- q * sqrt(n/4)`.
pub fn is_q_balanced(p: &Partition, q: f64) -> bool {
    assert_eq!(p.k(), 2, "q-balance is defined for bipartitions");
    let n = p.n() as f64;
    let half_width = q * (n / 4.0).sqrt();
    p.sizes().iter().all(|&s| {
        let sf = s as f64;
        s > 2 && sf > n / 2.0 - half_width && sf < n / 2.0 + half_width
    })
}

/// Same balance test on a raw size, used by enumeration-heavy callers that
/// avoid materializing `Partition` values.
pub fn size_is_q_balanced(size: usize, n: usize, q: f64) -> bool {
    let nf = n as f64;
    let half_width = q * (nf / 4.0).sqrt();
    let other = n - size;
    [size, other].iter().all(|&s| {
        let sf = s as f64;
        s > 2 && sf > nf / 2.0 - half_width && sf < nf / 2.0 + half_width
    })
}

/// Exhaustive enumeration of labeled bipartitions of `[n]` in binary
/// counting order: sample `i` goes to cluster `counter >> i & 1`.
///
/// Shards split the counter range, so parallel consumers can walk disjoint
/// pieces and merge deterministically.
pub struct BipartitionIter {
    n: usize,
    next: u64,
    end: u64,
    nonempty_only: bool,
}

impl BipartitionIter {
    /// Iterator over all `2^n` assignments (or `2^n - 2` with
    /// `nonempty_only`). Refuses `n` above the guard limit.
    pub fn new(n: usize, nonempty_only: bool) -> Result<Self> {
        Self::with_guard(n, nonempty_only, ENUMERATION_GUARD)
    }

    /// Same as [`BipartitionIter::new`] with a caller-chosen guard limit.
    pub fn with_guard(n: usize, nonempty_only: bool, guard: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("cannot enumerate bipartitions of 0 samples"));
        }
        if n > guard || n >= 64 {
            return Err(Error::invalid(format!(
                "refusing to enumerate 2^{n} bipartitions (guard limit {guard})"
            )));
        }
        Ok(BipartitionIter {
            n,
            next: 0,
            end: 1u64 << n,
            nonempty_only,
        })
    }

    /// Iterator over the counter range `start..end` of the full enumeration.
    pub fn shard(
        n: usize,
        nonempty_only: bool,
        start: u64,
        end: u64,
        guard: usize,
    ) -> Result<Self> {
        let mut it = Self::with_guard(n, nonempty_only, guard)?;
        if start > end || end > 1u64 << n {
            return Err(Error::invalid(format!(
                "invalid shard range {start}..{end} for n = {n}"
            )));
        }
        it.next = start;
        it.end = end;
        Ok(it)
    }

    fn decode(&self, counter: u64) -> Partition {
        let assign: Vec<usize> = (0..self.n).map(|i| ((counter >> i) & 1) as usize).collect();
        let ones = counter.count_ones() as usize;
        Partition {
            assign,
            sizes: vec![self.n - ones, ones],
        }
    }
}

impl Iterator for BipartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        while self.next < self.end {
            let counter = self.next;
            self.next += 1;
            if self.nonempty_only {
                let full = (1u64 << self.n) - 1;
                if counter == 0 || counter == full {
                    continue;
                }
            }
            return Some(self.decode(counter));
        }
        None
    }
}

/// Draws a dataset from the mixture. The labels follow the canonical
/// contiguous class order; the whole draw is a pure function of the spec.
pub fn sample_gmm(spec: &GmmSpec) -> Result<Dataset> {
    sample_gmm_with_centers(spec).map(|(ds, _)| ds)
}

/// Like [`sample_gmm`] but also returns the `K x d` matrix of true class
/// centers, for moment tests against the generative model.
pub fn sample_gmm_with_centers(spec: &GmmSpec) -> Result<(Dataset, Array2<f64>)> {
    spec.validate()?;
    let n = spec.n();
    let tau = spec.tau_sq.sqrt();
    let sigma = spec.sigma_sq.sqrt();
    let mut rng = SplitMix64::new(spec.seed);

    let mut centers = Array2::zeros((spec.k, spec.d));
    for l in 0..spec.k {
        for j in 0..spec.d {
            centers[[l, j]] = tau * rng.next_gaussian();
        }
    }

    let mut data = Array2::zeros((n, spec.d));
    let mut labels = Vec::with_capacity(n);
    let mut row = 0;
    for (l, &count) in spec.class_sizes.iter().enumerate() {
        for _ in 0..count {
            for j in 0..spec.d {
                data[[row, j]] = centers[[l, j]] + sigma * rng.next_gaussian();
            }
            labels.push(l);
            row += 1;
        }
    }

    Ok((
        Dataset {
            data,
            labels: Some(labels),
            spec: Some(spec.clone()),
        },
        centers,
    ))
}

/// Variant of [`sample_gmm`] with i.i.d. uniform latent labels instead of
/// fixed class sizes. Draws labels until every class is nonempty, then
/// reorders samples class-contiguously so downstream code sees the same
/// canonical layout.
pub fn sample_gmm_uniform_labels(
    k: usize,
    d: usize,
    tau_sq: f64,
    sigma_sq: f64,
    n: usize,
    seed: u64,
) -> Result<Dataset> {
    if k < 2 || n < k {
        return Err(Error::invalid("need K >= 2 and n >= K"));
    }
    let mut rng = SplitMix64::new(seed);
    let mut class_sizes;
    loop {
        class_sizes = vec![0usize; k];
        for _ in 0..n {
            class_sizes[rng.next_below(k as u64) as usize] += 1;
        }
        if class_sizes.iter().all(|&s| s > 0) {
            break;
        }
    }
    let spec = GmmSpec {
        k,
        d,
        tau_sq,
        sigma_sq,
        class_sizes,
        seed: rng.next_u64(),
    };
    sample_gmm(&spec)
}

/// Loads a rectangular numeric CSV. With `has_labels`, the last column must
/// hold integer class labels; they are remapped to dense indices `0..K` in
/// ascending order of the original values.
pub fn load_dataset_csv(path: impl AsRef<Path>, has_labels: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_dataset_csv(&text, has_labels, &path.display().to_string())
}

fn parse_dataset_csv(text: &str, has_labels: bool, path: &str) -> Result<Dataset> {
    let err = |row: usize, col: Option<usize>, msg: String| Error::CsvParse {
        path: path.to_string(),
        row,
        col,
        msg,
    };

    let mut width: Option<usize> = None;
    let mut values: Vec<f64> = Vec::new();
    let mut raw_labels: Vec<i64> = Vec::new();
    let mut n = 0usize;

    for (idx, line) in text.lines().enumerate() {
        let row = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        match width {
            None => {
                if has_labels && cells.len() < 2 {
                    return Err(err(
                        row,
                        None,
                        "expected at least one feature column and a label column".into(),
                    ));
                }
                width = Some(cells.len());
            }
            Some(w) if cells.len() != w => {
                return Err(err(
                    row,
                    None,
                    format!("expected {w} columns, found {}", cells.len()),
                ));
            }
            _ => {}
        }
        let w = width.unwrap();
        let feat_cols = if has_labels { w - 1 } else { w };
        for (c, cell) in cells.iter().enumerate() {
            let cell = cell.trim();
            if c < feat_cols {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| err(row, Some(c + 1), format!("not a number: {cell:?}")))?;
                values.push(v);
            } else {
                let l: i64 = cell.parse().map_err(|_| {
                    err(row, Some(c + 1), format!("not an integer label: {cell:?}"))
                })?;
                raw_labels.push(l);
            }
        }
        n += 1;
    }

    if n == 0 {
        return Err(err(1, None, "empty file".into()));
    }
    let d = if has_labels {
        width.unwrap() - 1
    } else {
        width.unwrap()
    };
    let data = Array2::from_shape_vec((n, d), values).expect("shape checked per row");

    let labels = if has_labels {
        let mut distinct: Vec<i64> = raw_labels.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let dense: Vec<usize> = raw_labels
            .iter()
            .map(|l| distinct.binary_search(l).unwrap())
            .collect();
        Some(dense)
    } else {
        None
    };

    Ok(Dataset {
        data,
        labels,
        spec: None,
    })
}

/// Writes a dataset as CSV. Floats use the shortest representation that
/// round-trips exactly; labels, when requested, go in the last column.
pub fn write_dataset_csv(ds: &Dataset, path: impl AsRef<Path>, include_labels: bool) -> Result<()> {
    let path = path.as_ref();
    if include_labels && ds.labels.is_none() {
        return Err(Error::invalid("dataset has no labels to write"));
    }
    let mut out = String::new();
    for i in 0..ds.n() {
        for j in 0..ds.dim() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", ds.data[[i, j]]);
        }
        if include_labels {
            let _ = write!(out, ",{}", ds.labels.as_ref().unwrap()[i]);
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_shapes_and_canonical_labels() {
        let spec = GmmSpec {
            k: 2,
            d: 3,
            tau_sq: 1.0,
            sigma_sq: 1.0,
            class_sizes: vec![2, 2],
            seed: 7,
        };
        let ds = sample_gmm(&spec).unwrap();
        assert_eq!(ds.n(), 4);
        assert_eq!(ds.dim(), 3);
        assert_eq!(ds.labels.as_deref(), Some(&[0, 0, 1, 1][..]));
    }

    #[test]
    fn degenerate_variances_give_zero_rows() {
        let spec = GmmSpec {
            k: 2,
            d: 4,
            tau_sq: 0.0,
            sigma_sq: 0.0,
            class_sizes: vec![3, 2],
            seed: 1,
        };
        let ds = sample_gmm(&spec).unwrap();
        assert!(ds.data.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let base = GmmSpec {
            k: 2,
            d: 2,
            tau_sq: 1.0,
            sigma_sq: 1.0,
            class_sizes: vec![2, 2],
            seed: 0,
        };
        let cases = [
            GmmSpec {
                k: 1,
                class_sizes: vec![4],
                ..base.clone()
            },
            GmmSpec {
                d: 0,
                ..base.clone()
            },
            GmmSpec {
                sigma_sq: -1.0,
                ..base.clone()
            },
            GmmSpec {
                tau_sq: f64::NAN,
                ..base.clone()
            },
            GmmSpec {
                class_sizes: vec![2, 0],
                ..base.clone()
            },
            GmmSpec {
                class_sizes: vec![4],
                ..base.clone()
            },
        ];
        for spec in cases {
            assert!(sample_gmm(&spec).is_err(), "accepted {spec:?}");
        }
    }

    #[test]
    fn sampling_is_bit_reproducible() {
        let spec = GmmSpec::balanced(3, 5, 2.0, 0.5, 4, 42);
        let a = sample_gmm(&spec).unwrap();
        let b = sample_gmm(&spec).unwrap();
        assert_eq!(a.data, b.data);
        for (x, y) in a.data.iter().zip(b.data.iter()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn within_class_difference_variance_matches_two_sigma_sq() {
        // Var of each coordinate of (x_i - x_j) for i, j in the same class
        // is 2 sigma^2: the shared center cancels.
        let sigma_sq = 0.7;
        let d = 200;
        let mut sum_sq = 0.0;
        let mut count = 0usize;
        for seed in 0..2000u64 {
            let spec = GmmSpec {
                k: 2,
                d,
                tau_sq: 1.0,
                sigma_sq,
                class_sizes: vec![2, 2],
                seed,
            };
            let ds = sample_gmm(&spec).unwrap();
            for j in 0..d {
                let diff = ds.data[[0, j]] - ds.data[[1, j]];
                sum_sq += diff * diff;
                count += 1;
            }
        }
        let emp_var = sum_sq / count as f64;
        // Independent-pair approximation: SE ~ 2*sigma_sq*sqrt(2/count).
        let se = 2.0 * sigma_sq * (2.0 / count as f64).sqrt();
        assert!(
            (emp_var - 2.0 * sigma_sq).abs() < 3.0 * se,
            "emp {emp_var} vs {} (se {se})",
            2.0 * sigma_sq
        );
    }

    #[test]
    fn centers_have_tau_sq_variance() {
        let spec = GmmSpec::balanced(2, 400, 2.5, 1.0, 2, 11);
        let mut sum_sq = 0.0;
        let mut count = 0;
        for seed in 0..200 {
            let (_, centers) = sample_gmm_with_centers(&GmmSpec {
                seed,
                ..spec.clone()
            })
            .unwrap();
            sum_sq += centers.iter().map(|c| c * c).sum::<f64>();
            count += centers.len();
        }
        let emp = sum_sq / count as f64;
        let se = spec.tau_sq * (2.0 / count as f64).sqrt();
        assert!((emp - spec.tau_sq).abs() < 4.0 * se, "emp {emp}");
    }

    #[test]
    fn purity_identity_and_mixed() {
        // Correct partition: identity purity rows.
        let p = Partition::new(vec![0, 0, 1, 1], 2).unwrap();
        let v = purity_view(&p, &[0, 0, 1, 1]).unwrap();
        assert_eq!(v.of(0, 0), Some(1.0));
        assert_eq!(v.of(0, 1), Some(0.0));
        assert_eq!(v.of(1, 1), Some(1.0));
        assert_eq!(v.r_star, 0.5);

        // Maximally mixed.
        let p = Partition::new(vec![0, 1, 0, 1], 2).unwrap();
        let v = purity_view(&p, &[0, 0, 1, 1]).unwrap();
        for j in 0..2 {
            for l in 0..2 {
                assert_eq!(v.of(j, l), Some(0.5));
            }
        }

        // Direct counts.
        let p = Partition::new(vec![0, 0, 0, 1], 2).unwrap();
        let v = purity_view(&p, &[0, 0, 1, 1]).unwrap();
        assert!((v.of(0, 0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(v.of(1, 1), Some(1.0));
    }

    #[test]
    fn purity_flags_empty_cluster_without_nan() {
        let p = Partition::new(vec![0, 0, 0, 0], 2).unwrap();
        let v = purity_view(&p, &[0, 0, 1, 1]).unwrap();
        assert!(v.purity[0].is_some());
        assert!(v.purity[1].is_none());
        assert!(v.purity[0].as_ref().unwrap().iter().all(|x| x.is_finite()));
    }

    #[test]
    fn purity_rows_sum_to_one() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..50 {
            let n = 2 + rng.next_below(20) as usize;
            let assign: Vec<usize> = (0..n).map(|_| rng.next_below(2) as usize).collect();
            let labels: Vec<usize> = (0..n).map(|_| rng.next_below(2) as usize).collect();
            let p = Partition::new(assign, 2).unwrap();
            let v = purity_view(&p, &labels).unwrap();
            for row in v.purity.iter().flatten() {
                let s: f64 = row.iter().sum();
                assert!((s - 1.0).abs() < 1e-12);
            }
            let ps: f64 = v.proportions.iter().sum();
            assert!((ps - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn correctness_up_to_permutation() {
        let labels = [0, 0, 1, 1];
        let swap = Partition::new(vec![1, 1, 0, 0], 2).unwrap();
        let id = Partition::new(vec![0, 0, 1, 1], 2).unwrap();
        let off = Partition::new(vec![0, 1, 1, 1], 2).unwrap();
        assert!(is_correct_partition(&swap, &labels));
        assert!(is_correct_partition(&id, &labels));
        assert!(!is_correct_partition(&off, &labels));
    }

    #[test]
    fn q_balance_examples() {
        let mk = |a: usize, b: usize| {
            let mut assign = vec![0; a];
            assign.extend(std::iter::repeat_n(1, b));
            Partition::new(assign, 2).unwrap()
        };
        assert!(is_q_balanced(&mk(8, 8), 1.0));
        assert!(!is_q_balanced(&mk(2, 14), 1.0));
        assert!(is_q_balanced(&mk(6, 10), 1.1)); // |6 - 8| = 2 < 2.2
        assert!(!is_q_balanced(&mk(6, 10), 1.0)); // 2 < 2 fails (strict)
    }

    #[test]
    fn enumeration_n2_nonempty() {
        let got: Vec<Vec<usize>> = BipartitionIter::new(2, true)
            .unwrap()
            .map(|p| p.assign().to_vec())
            .collect();
        assert_eq!(got, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn enumeration_counts_and_distinctness() {
        for n in 1..=12 {
            let mut seen = std::collections::HashSet::new();
            let mut count = 0u64;
            for p in BipartitionIter::new(n, false).unwrap() {
                assert_eq!(p.sizes()[0] + p.sizes()[1], n);
                assert!(seen.insert(p.assign().to_vec()));
                count += 1;
            }
            assert_eq!(count, 1 << n);
        }
        let count = BipartitionIter::new(3, true).unwrap().count();
        assert_eq!(count, 6);
    }

    #[test]
    fn enumeration_guard() {
        assert!(BipartitionIter::new(31, false).is_err());
        assert!(BipartitionIter::with_guard(16, false, 12).is_err());
    }

    #[test]
    fn shards_cover_the_full_enumeration() {
        let n = 10;
        let full: Vec<Vec<usize>> = BipartitionIter::new(n, true)
            .unwrap()
            .map(|p| p.assign().to_vec())
            .collect();
        let mut sharded = Vec::new();
        let total = 1u64 << n;
        for s in 0..4 {
            let (lo, hi) = (s * total / 4, (s + 1) * total / 4);
            for p in BipartitionIter::shard(n, true, lo, hi, ENUMERATION_GUARD).unwrap() {
                sharded.push(p.assign().to_vec());
            }
        }
        assert_eq!(full, sharded);
    }

    /// Exact binomial-coefficient census of unbalanced assignments.
    fn binomial(n: usize, k: usize) -> u128 {
        let mut row = vec![0u128; k + 1];
        row[0] = 1;
        for _ in 0..n {
            for j in (1..=k).rev() {
                row[j] += row[j - 1];
            }
        }
        row[k]
    }

    #[test]
    fn balance_census_matches_binomial_count() {
        for &n in &[8usize, 12, 16, 20] {
            for &q in &[0.5, 1.0, 2.0, 3.0] {
                let expected_unbalanced: u128 = (0..=n)
                    .filter(|&s| !size_is_q_balanced(s, n, q))
                    .map(|s| binomial(n, s))
                    .sum();
                let mut enumerated = 0u128;
                for counter in 0..(1u64 << n) {
                    let size1 = counter.count_ones() as usize;
                    if !size_is_q_balanced(size1, n, q) {
                        enumerated += 1;
                    }
                }
                assert_eq!(enumerated, expected_unbalanced, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn hoeffding_bounds_unbalanced_fraction_at_n12() {
        // Fraction of assignments with |size - 6| >= q*sqrt(3) at q = 2 is
        // at most 2 exp(-q^2/2).
        let (n, q) = (12usize, 2.0f64);
        let dev = q * (n as f64).sqrt() / 2.0;
        let count: u128 = (0..=n)
            .filter(|&s| (s as f64 - n as f64 / 2.0).abs() >= dev)
            .map(|s| binomial(n, s))
            .sum();
        let fraction = count as f64 / (1u128 << n) as f64;
        assert!(
            fraction <= 2.0 * (-q * q / 2.0).exp(),
            "fraction {fraction}"
        );
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.csv");

        std::fs::write(&path, "0,1\n2,3\n").unwrap();
        let ds = load_dataset_csv(&path, false).unwrap();
        assert_eq!(ds.n(), 2);
        assert_eq!(ds.dim(), 2);
        assert_eq!(ds.data[[1, 0]], 2.0);

        std::fs::write(&path, "0,1,1\n2,3,2\n").unwrap();
        let ds = load_dataset_csv(&path, true).unwrap();
        assert_eq!(ds.dim(), 2);
        assert_eq!(ds.labels.as_deref(), Some(&[0, 1][..]));

        std::fs::write(&path, "0,1\n2\n").unwrap();
        match load_dataset_csv(&path, false) {
            Err(Error::CsvParse { row, .. }) => assert_eq!(row, 2),
            other => panic!("expected parse error, got {other:?}"),
        }

        std::fs::write(&path, "0,abc\n").unwrap();
        match load_dataset_csv(&path, false) {
            Err(Error::CsvParse { row, col, .. }) => {
                assert_eq!(row, 1);
                assert_eq!(col, Some(2));
            }
            other => panic!("expected parse error, got {other:?}"),
        }

        std::fs::write(&path, "\n\n").unwrap();
        assert!(load_dataset_csv(&path, false).is_err());
    }

    #[test]
    fn dataset_csv_write_read_is_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ds.csv");
        let spec = GmmSpec::balanced(2, 3, 1.0, 0.3, 3, 5);
        let ds = sample_gmm(&spec).unwrap();
        write_dataset_csv(&ds, &path, true).unwrap();
        let back = load_dataset_csv(&path, true).unwrap();
        assert_eq!(back.labels, ds.labels);
        for (a, b) in ds.data.iter().zip(back.data.iter()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn gmm_spec_json_field_names() {
        let spec = GmmSpec {
            k: 2,
            d: 3,
            tau_sq: 1.0,
            sigma_sq: 2.0,
            class_sizes: vec![2, 2],
            seed: 9,
        };
        let json = serde_json::to_value(&spec).unwrap();
        let obj = json.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(|s| s.as_str()).collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            vec!["K", "class_sizes", "d", "seed", "sigma_sq", "tau_sq"]
        );
        let back: GmmSpec = serde_json::from_value(json).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn uniform_label_mode_has_no_empty_class() {
        for seed in 0..20 {
            let ds = sample_gmm_uniform_labels(3, 2, 1.0, 1.0, 9, seed).unwrap();
            let labels = ds.labels.unwrap();
            for l in 0..3 {
                assert!(labels.contains(&l), "class {l} empty at seed {seed}");
            }
        }
    }
}
