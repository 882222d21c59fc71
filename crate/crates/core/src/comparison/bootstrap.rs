use alloc::vec::Vec;

use rand::Rng;

use crate::rng::{self, Domain};
use crate::ComparisonError;

/// Sample mean with its standard error `sd / √n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSe {
    /// Sample mean.
    pub mean: f64,
    /// Standard error of the mean.
    pub se: f64,
}

impl MeanSe {
    /// Mean and standard error of `values`; needs two distinct values.
    pub fn of(values: &[f64]) -> Result<Self, ComparisonError> {
        if values.len() < 2 {
            return Err(ComparisonError::TooFewValues { got: values.len(), need: 2 });
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        let se = libm::sqrt(ss / (n - 1.0) / n);
        if se == 0.0 {
            return Err(ComparisonError::ZeroVariance);
        }
        Ok(MeanSe { mean, se })
    }
}

/// Studentized bootstrap interval for a mean.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BootstrapCi {
    /// Lower bound.
    pub lo: f64,
    /// Upper bound.
    pub hi: f64,
    /// Sample mean.
    pub mean: f64,
    /// Resamples with a usable (nonzero) standard error.
    pub replicates: usize,
}

impl BootstrapCi {
    /// Inverts the replicate t-statistics into an interval:
    /// `(mean − t_{1−α/2}·se, mean − t_{α/2}·se)`.
    pub fn from_replicates(
        base: MeanSe,
        mut t_stats: Vec<f64>,
        level: f64,
    ) -> Result<Self, ComparisonError> {
        if t_stats.is_empty() {
            return Err(ComparisonError::ZeroVariance);
        }
        t_stats.sort_unstable_by(f64::total_cmp);
        let alpha = 1.0 - level;
        let t_lo = quantile(&t_stats, alpha / 2.0);
        let t_hi = quantile(&t_stats, 1.0 - alpha / 2.0);
        Ok(BootstrapCi {
            lo: base.mean - t_hi * base.se,
            hi: base.mean - t_lo * base.se,
            mean: base.mean,
            replicates: t_stats.len(),
        })
    }
}

/// Linear interpolation between order statistics (Hyndman–Fan type 7).
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = libm::floor(h) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Checks the bootstrap parameters.
pub(crate) fn validate(n_resamples: usize, level: f64) -> Result<(), ComparisonError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(ComparisonError::InvalidLevel(level));
    }
    if n_resamples < 100 {
        return Err(ComparisonError::TooFewResamples(n_resamples));
    }
    Ok(())
}

/// t-statistic `(mean* − mean) / se*` of resample `index`, or `None` when
/// the resample has zero spread.
pub fn studentized_replicate(values: &[f64], base: MeanSe, seed: u64, index: u64) -> Option<f64> {
    let mut rng = rng::stream(seed, Domain::Bootstrap, index);
    let n = values.len();
    // shifted sums around the sample mean keep the variance well conditioned
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        let d = values[rng.random_range(0..n)] - base.mean;
        s1 += d;
        s2 += d * d;
    }
    let nf = n as f64;
    let var = (s2 - s1 * s1 / nf) / (nf - 1.0);
    if !(var > 0.0) {
        return None;
    }
    Some((s1 / nf) / libm::sqrt(var / nf))
}

/// Studentized (bootstrap-t) confidence interval of the mean of `values`.
pub fn bootstrap_mean_ci(
    values: &[f64],
    n_resamples: usize,
    level: f64,
    seed: u64,
) -> Result<BootstrapCi, ComparisonError> {
    validate(n_resamples, level)?;
    let base = MeanSe::of(values)?;
    let t_stats = (0..n_resamples as u64)
        .filter_map(|b| studentized_replicate(values, base, seed, b))
        .collect();
    BootstrapCi::from_replicates(base, t_stats, level)
}
