//! Partition-agreement and statistical-reporting metrics.

use crate::error::{Error, Result};

/// Joint label counts between two labelings; dividing by `n` gives the
/// empirical joint distribution.
#[derive(Debug, Clone)]
pub struct ContingencyTable {
    pub counts: Vec<Vec<u64>>,
    pub n: u64,
}

impl ContingencyTable {
    pub fn from_labels(a: &[usize], b: &[usize]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::invalid(format!(
                "label vectors differ in length: {} vs {}",
                a.len(),
                b.len()
            )));
        }
        if a.is_empty() {
            return Err(Error::invalid("label vectors must be nonempty"));
        }
        let ka = a.iter().max().unwrap() + 1;
        let kb = b.iter().max().unwrap() + 1;
        let mut counts = vec![vec![0u64; kb]; ka];
        for (&x, &y) in a.iter().zip(b) {
            counts[x][y] += 1;
        }
        Ok(ContingencyTable {
            counts,
            n: a.len() as u64,
        })
    }

    fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    fn col_sums(&self) -> Vec<u64> {
        let kb = self.counts.first().map_or(0, |r| r.len());
        let mut sums = vec![0u64; kb];
        for row in &self.counts {
            for (j, &c) in row.iter().enumerate() {
                sums[j] += c;
            }
        }
        sums
    }

    /// True when every nonzero row and column holds exactly one nonzero
    /// cell, i.e. the two labelings agree up to relabeling.
    fn is_permutation_like(&self) -> bool {
        for row in &self.counts {
            if row.iter().filter(|&&c| c > 0).count() > 1 {
                return false;
            }
        }
        let kb = self.counts.first().map_or(0, |r| r.len());
        for j in 0..kb {
            if self.counts.iter().filter(|r| r[j] > 0).count() > 1 {
                return false;
            }
        }
        true
    }
}

fn entropy(sums: &[u64], n: f64) -> f64 {
    sums.iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information between two labelings, in `[0, 1]`.
///
/// The mutual information of the empirical joint distribution is normalized
/// by the arithmetic mean of the two marginal entropies. Conventions:
/// `0 ln 0 = 0`; labelings that agree up to relabeling score exactly 1;
/// if exactly one labeling is constant the score is 0; if both are constant
/// they trivially agree, scoring 1.
pub fn nmi(a: &[usize], b: &[usize]) -> Result<f64> {
    let table = ContingencyTable::from_labels(a, b)?;
    let n = table.n as f64;
    let row = table.row_sums();
    let col = table.col_sums();
    let ha = entropy(&row, n);
    let hb = entropy(&col, n);

    if ha == 0.0 || hb == 0.0 {
        // Constant labelings carry no information to normalize.
        return Ok(if ha == 0.0 && hb == 0.0 { 1.0 } else { 0.0 });
    }
    if table.is_permutation_like() {
        return Ok(1.0);
    }

    let mut mi = 0.0;
    for (i, r) in table.counts.iter().enumerate() {
        for (j, &c) in r.iter().enumerate() {
            if c > 0 {
                let p = c as f64 / n;
                let ratio = p / ((row[i] as f64 / n) * (col[j] as f64 / n));
                mi += p * ratio.ln();
            }
        }
    }
    Ok((mi / (0.5 * (ha + hb))).clamp(0.0, 1.0))
}

/// Ternary score comparing an algorithm's loss against the ground-truth
/// partition's loss: `0` within relative tolerance, `+1` if the algorithm
/// is strictly better (lower loss), `-1` if the ground truth is better.
pub fn win_rate_score(loss_alg: f64, loss_truth: f64, rel_tol: f64) -> i8 {
    let scale = loss_truth.max(f64::MIN_POSITIVE);
    if (loss_alg - loss_truth).abs() <= rel_tol * scale {
        0
    } else if loss_alg < loss_truth {
        1
    } else {
        -1
    }
}

/// Default relative tolerance for [`win_rate_score`].
pub const WIN_RATE_REL_TOL: f64 = 1e-6;

/// Wilson score interval for a binomial proportion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilsonInterval {
    pub low: f64,
    pub high: f64,
    pub center: f64,
    pub width: f64,
    /// Plain point estimate `n_s / n`; plots use this, not the center.
    pub estimate: f64,
}

/// Computes the Wilson interval from success/failure counts at normal
/// quantile `z`. Robust near proportions of 0 or 1, where the interval
/// keeps a positive width.
pub fn wilson_interval(n_success: u64, n_fail: u64, z: f64) -> Result<WilsonInterval> {
    let n = n_success + n_fail;
    if n == 0 {
        return Err(Error::invalid("Wilson interval needs at least one trial"));
    }
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::invalid(format!(
            "z must be positive and finite, got {z}"
        )));
    }
    let nf = n as f64;
    let (ns, nfail) = (n_success as f64, n_fail as f64);
    let z2 = z * z;
    let center = (ns + z2 / 2.0) / (nf + z2);
    let width = z / (nf + z2) * (ns * nfail / nf + z2 / 4.0).sqrt();
    Ok(WilsonInterval {
        low: (center - width).clamp(0.0, 1.0),
        high: (center + width).clamp(0.0, 1.0),
        center,
        width,
        estimate: ns / nf,
    })
}

/// Default normal quantile (95% two-sided) for reported intervals.
pub const WILSON_Z: f64 = 1.96;
