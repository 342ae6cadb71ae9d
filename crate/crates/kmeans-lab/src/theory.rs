//! Closed-form distance scales, chi-squared tail bounds, decay factors,
//! noise thresholds, and union bounds for the fixed-point analysis of
//! Lloyd's and Hartigan's algorithms on the isotropic two-component
//! mixture.
//!
//! Squared distances from a sample to empirical centroids are scaled
//! chi-squared variables; every bound here reduces to comparing two such
//! scales `b1 > b2` through `rho = 1 - ((b1-b2)/(b1+b2))^2` and the decay
//! `rho^{d/4}`.

use crate::error::{Error, Result};

/// Chi-squared scale factors with `b1 > b2 > 0` (`b1` belongs to the
/// variable with the larger mean).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalePair {
    pub b1: f64,
    pub b2: f64,
}

impl ScalePair {
    pub fn new(b1: f64, b2: f64) -> Result<Self> {
        if !b1.is_finite() || !b2.is_finite() || b2 <= 0.0 || b1 <= b2 {
            return Err(Error::invalid(format!(
                "scale pair requires b1 > b2 > 0, got b1 = {b1}, b2 = {b2}"
            )));
        }
        Ok(ScalePair { b1, b2 })
    }

    /// Decay base `1 - ((b1-b2)/(b1+b2))^2`, always in `[0, 1)` for a valid
    /// pair.
    pub fn rho(&self) -> f64 {
        let ratio = (self.b1 - self.b2) / (self.b1 + self.b2);
        1.0 - ratio * ratio
    }
}

/// Inputs for the single-sample Lloyd bound: cluster sizes `c` (current,
/// at least 2) and `c_bar` (other, at least 1) with the model variances.
#[derive(Debug, Clone, Copy)]
pub struct LloydBoundInputs {
    pub tau_sq: f64,
    pub sigma_sq: f64,
    pub c: usize,
    pub c_bar: usize,
}

impl LloydBoundInputs {
    pub fn new(tau_sq: f64, sigma_sq: f64, c: usize, c_bar: usize) -> Result<Self> {
        if c < 2 {
            return Err(Error::invalid(format!(
                "current cluster size must be >= 2, got {c}"
            )));
        }
        if c_bar < 1 {
            return Err(Error::invalid("other cluster size must be >= 1"));
        }
        if !tau_sq.is_finite() || tau_sq < 0.0 {
            return Err(Error::invalid(format!(
                "tau_sq must be finite and >= 0, got {tau_sq}"
            )));
        }
        if !sigma_sq.is_finite() || sigma_sq <= 0.0 {
            return Err(Error::invalid(format!(
                "sigma_sq must be finite and > 0, got {sigma_sq}"
            )));
        }
        Ok(LloydBoundInputs {
            tau_sq,
            sigma_sq,
            c,
            c_bar,
        })
    }
}

/// Inputs for the single-sample Hartigan bound: sizes and purities of the
/// current cluster (`_j`) and the other cluster (`_jbar`) with respect to
/// the sample's ground-truth class.
#[derive(Debug, Clone, Copy)]
pub struct HartiganBoundInputs {
    pub tau_sq: f64,
    pub sigma_sq: f64,
    pub size_j: usize,
    pub size_jbar: usize,
    pub r_j: f64,
    pub r_jbar: f64,
}

impl HartiganBoundInputs {
    /// Validating constructor; enforces `0 < r_j <= r_jbar <= 1`.
    pub fn new(
        tau_sq: f64,
        sigma_sq: f64,
        size_j: usize,
        size_jbar: usize,
        r_j: f64,
        r_jbar: f64,
    ) -> Result<Self> {
        let me = Self::new_unchecked(tau_sq, sigma_sq, size_j, size_jbar, r_j, r_jbar)?;
        if !(r_j > 0.0 && r_j <= r_jbar && r_jbar <= 1.0) {
            return Err(Error::invalid(format!(
                "purities must satisfy 0 < r_j <= r_jbar <= 1, got r_j = {r_j}, r_jbar = {r_jbar}"
            )));
        }
        Ok(me)
    }

    /// Skips the purity-ordering domain check (boundary arithmetic tests);
    /// structural requirements still hold.
    pub fn new_unchecked(
        tau_sq: f64,
        sigma_sq: f64,
        size_j: usize,
        size_jbar: usize,
        r_j: f64,
        r_jbar: f64,
    ) -> Result<Self> {
        if size_j < 2 {
            return Err(Error::invalid("current cluster size must be >= 2"));
        }
        if size_jbar < 1 {
            return Err(Error::invalid("other cluster size must be >= 1"));
        }
        if !tau_sq.is_finite() || !sigma_sq.is_finite() || tau_sq < 0.0 || sigma_sq < 0.0 {
            return Err(Error::invalid("variances must be finite and >= 0"));
        }
        Ok(HartiganBoundInputs {
            tau_sq,
            sigma_sq,
            size_j,
            size_jbar,
            r_j,
            r_jbar,
        })
    }
}

/// Scale of the squared distance from a sample to its current cluster's
/// centroid: `2 tau^2 (1-r)^2 + (1 - 1/c) sigma^2`, where `r` is the
/// cluster's purity with respect to the sample's class.
pub fn alpha_current(tau_sq: f64, sigma_sq: f64, c: usize, r: f64) -> f64 {
    let cf = c as f64;
    2.0 * tau_sq * (1.0 - r) * (1.0 - r) + (1.0 - 1.0 / cf) * sigma_sq
}

/// Scale of the squared distance from a sample to the other cluster's
/// centroid: `2 tau^2 (1-r)^2 + (1 + 1/c_bar) sigma^2`.
pub fn alpha_other(tau_sq: f64, sigma_sq: f64, c_bar: usize, r: f64) -> f64 {
    let cf = c_bar as f64;
    2.0 * tau_sq * (1.0 - r) * (1.0 - r) + (1.0 + 1.0 / cf) * sigma_sq
}

/// Scales of the single-misclassification extreme: the current-cluster
/// scale is maximized at purity `1/c` and the other-cluster scale is
/// minimized at purity 1, giving
/// `b2 = (1 - 1/c) sigma^2 + 2 tau^2 (c-1)^2 / c^2` and
/// `b1 = (1 + 1/c_bar) sigma^2`.
///
/// Errors when `b1 <= b2`, i.e. the noise is at or below the threshold
/// where the comparison degenerates.
pub fn most_favorable_scales(inputs: &LloydBoundInputs) -> Result<ScalePair> {
    let c = inputs.c as f64;
    let a_c =
        (1.0 - 1.0 / c) * inputs.sigma_sq + 2.0 * inputs.tau_sq * (c - 1.0) * (c - 1.0) / (c * c);
    let a_t = (1.0 + 1.0 / inputs.c_bar as f64) * inputs.sigma_sq;
    ScalePair::new(a_t, a_c).map_err(|_| {
        Error::invalid(format!(
            "below noise threshold: other-cluster scale {a_t} does not exceed current-cluster scale {a_c}"
        ))
    })
}

/// Result of the chi-squared difference tail bound.
#[derive(Debug, Clone, Copy)]
pub struct TailBound {
    /// `exp(m (b1-b2) / (8 b1 b2)) * rho^{d/4}`; may exceed 1 (vacuous).
    pub bound: f64,
    /// The decay base `1 - ((b1-b2)/(b1+b2))^2`.
    pub rho: f64,
}

/// Chernoff bound on `P(Y1 - Y2 <= m)` for `Y1 ~ b1 chi^2_d`,
/// `Y2 ~ b2 chi^2_d`, not necessarily independent.
pub fn chi_diff_tail_bound(sp: &ScalePair, m: f64, d: usize) -> Result<TailBound> {
    if d == 0 {
        return Err(Error::invalid("degrees of freedom must be >= 1"));
    }
    let rho = sp.rho();
    let prefactor = (m * (sp.b1 - sp.b2) / (8.0 * sp.b1 * sp.b2)).exp();
    Ok(TailBound {
        bound: prefactor * rho.powf(d as f64 / 4.0),
        rho,
    })
}

/// Noise threshold above which the single-sample Lloyd bound applies:
/// `sqrt(2 c_bar) * tau * (c-1) / sqrt(c (c + c_bar))`. This is exactly the
/// sigma at which the two most-favorable scales coincide.
pub fn lloyd_noise_threshold(tau: f64, c: usize, c_bar: usize) -> f64 {
    let (c, cb) = (c as f64, c_bar as f64);
    (2.0 * cb).sqrt() * tau * (c - 1.0) / (c * (c + cb)).sqrt()
}

/// Decay base for the probability that Lloyd's update moves a fixed sample
/// out of a cluster of size `c` into the cluster of size `c_bar`:
///
/// ```text
/// rho = 4 s2 (c-1) c^2 cb (cb+1) (c (s2 + 2 t2) - 2 t2)
///       / (-c (s2 + 4 t2) cb + c^2 (s2 + 2 (s2 + t2) cb) + 2 t2 cb)^2
/// ```
///
/// with `s2 = sigma^2`, `t2 = tau^2`. Requires sigma strictly above
/// [`lloyd_noise_threshold`]. Equal to `ScalePair::rho` of the
/// most-favorable scales; that identity is enforced by tests rather than
/// assumed here, as a transcription guard.
pub fn lloyd_rho(inputs: &LloydBoundInputs) -> Result<f64> {
    let threshold = lloyd_noise_threshold(inputs.tau_sq.sqrt(), inputs.c, inputs.c_bar);
    let sigma = inputs.sigma_sq.sqrt();
    if sigma.is_nan() || sigma <= threshold {
        return Err(Error::invalid(format!(
            "sigma {sigma} is not above the noise threshold {threshold}"
        )));
    }
    let s2 = inputs.sigma_sq;
    let t2 = inputs.tau_sq;
    let c = inputs.c as f64;
    let cb = inputs.c_bar as f64;
    let num = 4.0 * s2 * (c - 1.0) * c * c * cb * (cb + 1.0) * (c * (s2 + 2.0 * t2) - 2.0 * t2);
    let den = -c * (s2 + 4.0 * t2) * cb + c * c * (s2 + 2.0 * (s2 + t2) * cb) + 2.0 * t2 * cb;
    Ok(num / (den * den))
}

/// Noise level pinned by the uniform balanced-partition theorem (tau = 1):
/// `sigma = beta (sqrt(n) q + n - 2) / (sqrt(2) sqrt(sqrt(n) q + n))`.
pub fn sigma_balanced(beta: f64, n: f64, q: f64) -> f64 {
    let s = n.sqrt();
    beta * (s * q + n - 2.0) / (std::f64::consts::SQRT_2 * (s * q + n).sqrt())
}

/// Uniform decay base over all q-approximately balanced bipartitions at
/// tau = 1. Computed from the scale pair at the extreme cluster size
/// `M = n/2 + q sqrt(n/4)`:
/// `rho_q = 1 - ((b1 - b2)/(b1 + b2))^2` with `b1 = (1 + 1/M) sigma^2`,
/// `b2 = (1 - 1/M) sigma^2 + 2 (M-1)^2 / M^2`.
///
/// This is the construction the printed rational expression simplifies to;
/// the two agree to rounding error and this form degrades gracefully at
/// the threshold (`beta = 1` gives exactly 1).
pub fn lloyd_rho_balanced(sigma: f64, n: f64, q: f64) -> Result<f64> {
    if n.is_nan() || n < 4.0 {
        return Err(Error::invalid(format!("n must be >= 4, got {n}")));
    }
    if q.is_nan() || q <= 0.0 || sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::invalid("q and sigma must be positive"));
    }
    let m = n / 2.0 + q * (n / 4.0).sqrt();
    let s2 = sigma * sigma;
    let b1 = (1.0 + 1.0 / m) * s2;
    let b2 = (1.0 - 1.0 / m) * s2 + 2.0 * (m - 1.0) * (m - 1.0) / (m * m);
    let ratio = (b1 - b2) / (b1 + b2);
    Ok(1.0 - ratio * ratio)
}

/// A union bound kept in log space, with the probability clamped to
/// `[0, 1]` (the raw bound is often vacuous).
#[derive(Debug, Clone, Copy)]
pub struct UnionBound {
    pub log_bound: f64,
    pub probability: f64,
}

fn union_bound(log_count: f64, d: usize, rho: f64) -> Result<UnionBound> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::invalid(format!("rho must lie in [0, 1], got {rho}")));
    }
    let log_bound = log_count + d as f64 / 4.0 * rho.ln();
    Ok(UnionBound {
        log_bound,
        probability: log_bound.exp().min(1.0),
    })
}

/// `2^n n rho_q^{d/4}`: bound on the probability that some q-approximately
/// balanced bipartition fails to be a Lloyd fixed point.
pub fn lloyd_union_bound(n: usize, d: usize, rho_q: f64) -> Result<UnionBound> {
    union_bound(
        n as f64 * std::f64::consts::LN_2 + (n as f64).ln(),
        d,
        rho_q,
    )
}

/// `2^n rho_h^{d/4}`: bound on the probability that some nonempty incorrect
/// bipartition is a Hartigan fixed point.
pub fn hartigan_union_bound(n: usize, d: usize, rho_h: f64) -> Result<UnionBound> {
    union_bound(n as f64 * std::f64::consts::LN_2, d, rho_h)
}

/// Scale of the Hartigan weighted squared distance: `2 tau^2 w (1-r)^2 +
/// sigma^2` with weight `size/(size-1)` toward the sample's current cluster
/// and `size/(size+1)` toward another cluster.
pub fn hartigan_eta(
    tau_sq: f64,
    sigma_sq: f64,
    size: usize,
    r: f64,
    is_current: bool,
) -> Result<f64> {
    if is_current && size < 2 {
        return Err(Error::invalid(
            "Hartigan scale toward the current cluster needs size >= 2",
        ));
    }
    if size == 0 {
        return Err(Error::invalid("cluster size must be >= 1"));
    }
    let s = size as f64;
    let w = if is_current {
        s / (s - 1.0)
    } else {
        s / (s + 1.0)
    };
    Ok(2.0 * tau_sq * w * (1.0 - r) * (1.0 - r) + sigma_sq)
}

/// Decay base for the probability that Hartigan's rule keeps a sample in a
/// cluster no purer than the alternative:
///
/// ```text
/// rho = 1 - ( t2 (w_j (1-r_j)^2 - w_jbar (1-r_jbar)^2)
///           / (t2 (w_j (1-r_j)^2 + w_jbar (1-r_jbar)^2) + s2) )^2
/// ```
///
/// with the weights of [`hartigan_eta`]. Equals `ScalePair::rho` of the two
/// eta scales.
pub fn hartigan_rho(inputs: &HartiganBoundInputs) -> Result<f64> {
    let wj = inputs.size_j as f64 / (inputs.size_j as f64 - 1.0);
    let wjb = inputs.size_jbar as f64 / (inputs.size_jbar as f64 + 1.0);
    let gj = wj * (1.0 - inputs.r_j) * (1.0 - inputs.r_j);
    let gjb = wjb * (1.0 - inputs.r_jbar) * (1.0 - inputs.r_jbar);
    let num = inputs.tau_sq * (gj - gjb);
    let den = inputs.tau_sq * (gj + gjb) + inputs.sigma_sq;
    let ratio = num / den;
    Ok(1.0 - ratio * ratio)
}

/// Uniform decay base over all nonempty incorrect bipartitions:
/// `rho_h = 1 - (4 tau^2 (r_star)^2 / (n (3 tau^2 + sigma^2)))^2`, where
/// `r_star` is the proportion of the smallest ground-truth class.
pub fn hartigan_rho_uniform(tau_sq: f64, sigma_sq: f64, n: usize, r_star: f64) -> Result<f64> {
    if n < 4 {
        return Err(Error::invalid(format!("n must be >= 4, got {n}")));
    }
    if !(r_star > 0.0 && r_star <= 0.5) {
        return Err(Error::invalid(format!(
            "r_star must lie in (0, 0.5], got {r_star}"
        )));
    }
    let ratio = 4.0 * tau_sq * r_star * r_star / (n as f64) / (3.0 * tau_sq + sigma_sq);
    Ok(1.0 - ratio * ratio)
}
