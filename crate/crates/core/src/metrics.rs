//! Scalar performance measures of a confusion matrix.
//!
//! All functions are pure. Counts stay in exact integer arithmetic until the
//! final division, so the degenerate cases (an all-in-one-column matrix, a
//! perfect classifier) are detected exactly rather than through rounding.

use crate::{ConfusionMatrix, MetricError};

/// Fraction of correctly classified samples, `trace / total`.
pub fn accuracy(c: &ConfusionMatrix) -> f64 {
    c.trace() as f64 / c.total() as f64
}

/// Multi-class Matthews Correlation Coefficient.
///
/// Evaluated through the marginals: with trace `c`, total `s`, row sums `t`
/// and column sums `p`,
///
/// ```text
///            c·s − Σ p_k t_k
/// MCC = ─────────────────────────────
///       √(s² − Σ p_k²) · √(s² − Σ t_k²)
/// ```
///
/// which is the same quantity as the covariance of the one-hot true and
/// predicted label matrices. When either square-root factor is zero (every
/// sample predicted as, or belonging to, a single class) the result is 0.
pub fn mcc(c: &ConfusionMatrix) -> f64 {
    let m = c.marginals();
    let s = m.total as u128;
    let cs = m.trace as u128 * s;
    let (mut pt, mut pp, mut tt) = (0u128, 0u128, 0u128);
    for (&t, &p) in m.row_sums.iter().zip(&m.col_sums) {
        let (t, p) = (t as u128, p as u128);
        pt += p * t;
        pp += p * p;
        tt += t * t;
    }
    let ss = s * s;
    let (den_pred, den_true) = (ss - pp, ss - tt);
    if den_pred == 0 || den_true == 0 {
        return 0.0;
    }
    let num = if cs >= pt { (cs - pt) as f64 } else { -((pt - cs) as f64) };
    // a single root keeps num/den exact at ±1 when the factors coincide
    let den = libm::sqrt(den_pred as f64 * den_true as f64);
    (num / den).clamp(-1.0, 1.0)
}

/// `-x log(x) / log(base)`, with the `0 log 0 = 0` convention.
fn entropy_term(x: f64, ln_base: f64) -> f64 {
    if x > 0.0 {
        -x * libm::log(x) / ln_base
    } else {
        0.0
    }
}

/// Confusion Entropy, logarithm base `2(N − 1)`.
///
/// For each class `j` let `d_j = Σ_k C_jk + C_kj` (its row plus column,
/// diagonal counted twice). Then `P_j = d_j / 2S` and the misclassification
/// probabilities are `C_jk / d_j` and `C_kj / d_j` for `k ≠ j`:
///
/// ```text
/// CEN = Σ_j P_j Σ_{k≠j} h(C_jk / d_j) + h(C_kj / d_j),   h(x) = −x log_{2N−2} x
/// ```
///
/// Classes with an empty row and column have `P_j = 0` and contribute
/// nothing.
pub fn cen(c: &ConfusionMatrix) -> f64 {
    let n = c.n();
    let m = c.marginals();
    let ln_base = libm::log((2 * (n - 1)) as f64);
    let two_s = 2.0 * m.total as f64;
    let mut acc = 0.0;
    for j in 0..n {
        let d = m.row_sums[j] + m.col_sums[j];
        if d == 0 {
            continue;
        }
        let d = d as f64;
        let mut inner = 0.0;
        for k in (0..n).filter(|&k| k != j) {
            inner += entropy_term(c.get(j, k) as f64 / d, ln_base);
            inner += entropy_term(c.get(k, j) as f64 / d, ln_base);
        }
        acc += d / two_s * inner;
    }
    acc
}

/// Binary MCC from the four cell counts of `[[tp, fn], [fp, tn]]`.
///
/// Returns 0 when any factor under the root is zero.
pub fn mcc_binary(tp: u64, fn_: u64, fp: u64, tn: u64) -> Result<f64, MetricError> {
    if tp + fn_ + fp + tn == 0 {
        return Err(MetricError::EmptyBinary);
    }
    let (tp, fn_, fp, tn) = (tp as f64, fn_ as f64, fp as f64, tn as f64);
    let den = (tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_);
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok(((tp * tn - fp * fn_) / libm::sqrt(den)).clamp(-1.0, 1.0))
}

/// Binary CEN from the four cell counts of `[[tp, fn], [fp, tn]]`.
///
/// ```text
/// CEN = (FN+FP)·log₂(S² − (TP−TN)²) / 2S − (FN log₂ FN + FP log₂ FP) / S
/// ```
///
/// Can exceed 1, e.g. `[[T, F], [F, T]]` with `0 < T < F`.
pub fn cen_binary(tp: u64, fn_: u64, fp: u64, tn: u64) -> Result<f64, MetricError> {
    let s = tp + fn_ + fp + tn;
    if s == 0 {
        return Err(MetricError::EmptyBinary);
    }
    let wrong = fn_ + fp;
    if wrong == 0 {
        return Ok(0.0);
    }
    // S² − (TP−TN)² = (2TP+FN+FP)(2TN+FN+FP), positive once FN+FP > 0.
    let spread = (2 * tp + wrong) as f64 * (2 * tn + wrong) as f64;
    let s = s as f64;
    let xlog2x = |x: u64| if x == 0 { 0.0 } else { x as f64 * libm::log2(x as f64) };
    Ok(wrong as f64 * libm::log2(spread) / (2.0 * s) - (xlog2x(fn_) + xlog2x(fp)) / s)
}

/// Dimension calibration `k(N) = 1.012·(1 + 0.18924/log₂N − 0.06694/log₂²N)`.
///
/// Defined for `n >= 3`; tends to 1.012 as `n` grows.
pub fn k_factor(n: usize) -> Result<f64, MetricError> {
    if n < 3 {
        return Err(MetricError::NeedsMultiClass(n));
    }
    let l = libm::log2(n as f64);
    Ok(1.012 * (1.0 + 0.18924 / l - 0.06694 / (l * l)))
}

/// Transformed MCC, `(1 − MCC)(1 − log_{2N−2}(1 − ACC))(1 − 1/N)`.
///
/// Tracks `k(N)·CEN`. Exactly 0 for a perfect classifier. On matrices with
/// constant diagonal and constant off-diagonal entries it equals CEN
/// exactly.
pub fn tmcc(c: &ConfusionMatrix) -> Result<f64, MetricError> {
    let n = c.n();
    if n < 3 {
        return Err(MetricError::NeedsMultiClass(n));
    }
    let total = c.total();
    let wrong = total - c.trace();
    if wrong == 0 {
        return Ok(0.0);
    }
    let error_rate = wrong as f64 / total as f64;
    let log_term = 1.0 - libm::log(error_rate) / libm::log((2 * (n - 1)) as f64);
    Ok((1.0 - mcc(c)) * log_term * (1.0 - 1.0 / n as f64))
}

/// Every scalar measure of one matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MetricReport {
    /// Class count.
    pub n: usize,
    /// Sample count.
    pub total: u64,
    /// Accuracy.
    pub acc: f64,
    /// Matthews Correlation Coefficient.
    pub mcc: f64,
    /// Confusion Entropy.
    pub cen: f64,
    /// Transformed MCC; `None` for binary matrices.
    pub tmcc: Option<f64>,
    /// `k(N)·CEN`; `None` for binary matrices.
    pub k_cen: Option<f64>,
}

/// Computes all measures of `c`. The `k`-based fields are absent for `n = 2`.
pub fn metric_report(c: &ConfusionMatrix) -> MetricReport {
    let cen = cen(c);
    MetricReport {
        n: c.n(),
        total: c.total(),
        acc: accuracy(c),
        mcc: mcc(c),
        cen,
        tmcc: tmcc(c).ok(),
        k_cen: k_factor(c.n()).ok().map(|k| k * cen),
    }
}
