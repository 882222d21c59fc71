//! Monte-Carlo study of how closely tMCC tracks `k(N)·CEN`.
//!
//! Matrix `i` of a run is generated from its own random stream keyed by
//! `(seed, i)`: a dimension uniform in `dim_min..=dim_max`, one ratio `ρ`
//! uniform in `[rho_min, rho_max]`, diagonal entries uniform in
//! `1..=diag_max` and off-diagonal entries uniform in
//! `1..=floor(diag_max·ρ)`. Records therefore do not depend on evaluation
//! order, and the aggregation here consumes them in index order.

use alloc::vec::Vec;

use rand::Rng;

use crate::comparison::{
    self, BootstrapCi, ComparisonResult, MeanSe, PairCounts, PearsonAccumulator,
};
use crate::metrics;
use crate::rng::{self, Domain};
use crate::{ConfigError, ConfusionMatrix};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_100;

/// Pairs per sampled-consistency block.
pub const PAIR_BLOCK: u64 = 1 << 20;

/// Records kept for the pairwise and bootstrap statistics; beyond this a
/// uniform reservoir is kept instead.
pub const RESERVOIR_CAPACITY: usize = 1 << 21;

/// Run parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentConfig {
    /// Matrices to generate.
    pub n_matrices: u64,
    /// Smallest dimension.
    pub dim_min: usize,
    /// Largest dimension.
    pub dim_max: usize,
    /// Upper bound for diagonal entries.
    pub diag_max: u64,
    /// Lower bound of `ρ`.
    pub rho_min: f64,
    /// Upper bound of `ρ`.
    pub rho_max: f64,
    /// Master seed.
    pub seed: u64,
    /// Bootstrap resamples for the mean-ratio interval.
    pub bootstrap_resamples: usize,
    /// Bootstrap confidence level.
    pub bootstrap_level: f64,
    /// Above this many record pairs, consistency is estimated from this many
    /// sampled pairs instead of all of them.
    pub pair_budget: u64,
    /// Tie threshold for consistency and discriminancy.
    pub tie_tolerance: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_matrices: 200_000,
            dim_min: 3,
            dim_max: 30,
            diag_max: 1000,
            rho_min: 0.01,
            rho_max: 1.0,
            seed: DEFAULT_SEED,
            bootstrap_resamples: 10_000,
            bootstrap_level: 0.95,
            pair_budget: 100_000_000,
            tie_tolerance: comparison::DEFAULT_TIE_TOLERANCE,
        }
    }
}

impl ExperimentConfig {
    /// Checks every invariant of the configuration.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.dim_min < 3 || self.dim_min > self.dim_max {
            return Err(ConfigError::Dimensions { min: self.dim_min, max: self.dim_max });
        }
        if !(self.rho_min > 0.0 && self.rho_min <= self.rho_max && self.rho_max <= 1.0) {
            return Err(ConfigError::Rho { min: self.rho_min, max: self.rho_max });
        }
        if self.diag_max == 0 {
            return Err(ConfigError::DiagMax);
        }
        if off_diagonal_bound(self.diag_max, self.rho_min) == 0 {
            return Err(ConfigError::OffDiagonalBound);
        }
        comparison::bootstrap::validate(self.bootstrap_resamples, self.bootstrap_level)
            .map_err(ConfigError::Bootstrap)?;
        if !(self.tie_tolerance >= 0.0) {
            return Err(ConfigError::Bootstrap(crate::ComparisonError::NegativeTolerance));
        }
        Ok(())
    }
}

fn off_diagonal_bound(diag_max: u64, rho: f64) -> u64 {
    libm::floor(diag_max as f64 * rho) as u64
}

/// One generated matrix, reduced to the scatter coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentRecord {
    /// Position in the run.
    pub index: u64,
    /// Dimension.
    pub n: usize,
    /// Accuracy.
    pub acc: f64,
    /// MCC.
    pub mcc: f64,
    /// CEN.
    pub cen: f64,
    /// `k(n)·CEN`.
    pub k_cen: f64,
    /// Transformed MCC.
    pub tmcc: f64,
    /// `tmcc / k_cen`; absent when `cen = 0`.
    pub ratio: Option<f64>,
}

/// Draws one `n×n` matrix following the generation protocol.
pub fn generate_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, cfg: &ExperimentConfig) -> ConfusionMatrix {
    let rho = rng.random_range(cfg.rho_min..=cfg.rho_max);
    let off_max = off_diagonal_bound(cfg.diag_max, rho).max(1);
    let entries = (0..n * n)
        .map(|k| {
            if k / n == k % n {
                rng.random_range(1..=cfg.diag_max)
            } else {
                rng.random_range(1..=off_max)
            }
        })
        .collect();
    ConfusionMatrix::from_row_major(n, entries).expect("generated entries are positive")
}

/// Reduces a matrix to its record. `c` must have at least 3 classes.
pub fn evaluate(index: u64, c: &ConfusionMatrix) -> ExperimentRecord {
    let n = c.n();
    let k = metrics::k_factor(n).expect("experiment matrices have n >= 3");
    let cen = metrics::cen(c);
    let k_cen = k * cen;
    let tmcc = metrics::tmcc(c).expect("experiment matrices have n >= 3");
    ExperimentRecord {
        index,
        n,
        acc: metrics::accuracy(c),
        mcc: metrics::mcc(c),
        cen,
        k_cen,
        tmcc,
        ratio: (k_cen > 0.0).then(|| tmcc / k_cen),
    }
}

/// Generates and evaluates matrix `index` of the run described by `cfg`.
pub fn record_for_index(cfg: &ExperimentConfig, index: u64) -> ExperimentRecord {
    let mut rng = rng::stream(cfg.seed, Domain::Matrices, index);
    let n = rng.random_range(cfg.dim_min..=cfg.dim_max);
    let c = generate_matrix(&mut rng, n, cfg);
    evaluate(index, &c)
}

/// Aggregate statistics of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExperimentSummary {
    /// Pearson correlation of tMCC and `k·CEN`.
    pub pearson_r: Option<f64>,
    /// Degree of consistency of tMCC and `k·CEN`.
    pub consistency: Option<f64>,
    /// Degree of discriminancy of tMCC over `k·CEN`.
    pub discriminancy: Option<f64>,
    /// Mean of `tmcc / k_cen`.
    pub mean_ratio: Option<f64>,
    /// Bootstrap interval lower bound for the mean ratio.
    pub ci_lo: Option<f64>,
    /// Bootstrap interval upper bound for the mean ratio.
    pub ci_hi: Option<f64>,
    /// Records aggregated.
    pub n_matrices: u64,
    /// Master seed.
    pub seed: u64,
}

/// Compensated (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Streaming aggregation of records, fed in index order.
///
/// Single-pass statistics are exact over every record; the pairwise and
/// bootstrap statistics run on the retained sample, which is every record
/// up to [`RESERVOIR_CAPACITY`].
#[derive(Debug, Clone)]
pub struct SummaryAccumulator {
    seed: u64,
    count: u64,
    pearson: PearsonAccumulator,
    ratio_sum: KahanSum,
    ratio_count: u64,
    tmcc: Vec<f64>,
    k_cen: Vec<f64>,
    ratio: Vec<Option<f64>>,
    reservoir_rng: rand_chacha::ChaCha8Rng,
}

impl SummaryAccumulator {
    /// Empty accumulator for a run seeded with `seed`.
    pub fn new(seed: u64) -> Self {
        SummaryAccumulator {
            seed,
            count: 0,
            pearson: PearsonAccumulator::new(),
            ratio_sum: KahanSum::default(),
            ratio_count: 0,
            tmcc: Vec::new(),
            k_cen: Vec::new(),
            ratio: Vec::new(),
            reservoir_rng: rng::stream(seed, Domain::Reservoir, 0),
        }
    }

    /// Adds the next record.
    pub fn push(&mut self, r: &ExperimentRecord) {
        self.count += 1;
        self.pearson.push(r.tmcc, r.k_cen);
        if let Some(x) = r.ratio {
            self.ratio_sum.add(x);
            self.ratio_count += 1;
        }
        if self.tmcc.len() < RESERVOIR_CAPACITY {
            self.tmcc.push(r.tmcc);
            self.k_cen.push(r.k_cen);
            self.ratio.push(r.ratio);
        } else {
            let slot = self.reservoir_rng.random_range(0..self.count);
            if let Ok(slot) = usize::try_from(slot) {
                if slot < RESERVOIR_CAPACITY {
                    self.tmcc[slot] = r.tmcc;
                    self.k_cen[slot] = r.k_cen;
                    self.ratio[slot] = r.ratio;
                }
            }
        }
    }

    /// Records seen.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Retained `(tmcc, k_cen)` columns.
    pub fn pair_sample(&self) -> (&[f64], &[f64]) {
        (&self.tmcc, &self.k_cen)
    }

    /// Retained defined ratios, in retention order.
    pub fn ratio_sample(&self) -> Vec<f64> {
        self.ratio.iter().flatten().copied().collect()
    }

    /// Assembles the summary from externally computed pair counts and
    /// bootstrap interval.
    pub fn finish(&self, pairs: Option<PairCounts>, ci: Option<BootstrapCi>, tie_tolerance: f64) -> ExperimentSummary {
        let cmp = pairs.map(|p| ComparisonResult::from_counts(p, tie_tolerance));
        ExperimentSummary {
            pearson_r: self.pearson.correlation(),
            consistency: cmp.and_then(|c| c.consistency),
            discriminancy: cmp.and_then(|c| c.discriminancy),
            mean_ratio: (self.ratio_count > 0).then(|| self.ratio_sum.value() / self.ratio_count as f64),
            ci_lo: ci.map(|c| c.lo),
            ci_hi: ci.map(|c| c.hi),
            n_matrices: self.count,
            seed: self.seed,
        }
    }
}

/// How record pairs are visited for consistency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairPlan {
    /// Fewer than two records.
    None,
    /// Every unordered pair.
    Exhaustive,
    /// `total` uniformly sampled pairs in blocks of [`PAIR_BLOCK`].
    Sampled {
        /// Pairs to draw.
        total: u64,
    },
}

impl PairPlan {
    /// Exhaustive when `len·(len−1)/2 <= budget`, otherwise `budget` samples.
    pub fn for_len(len: usize, budget: u64) -> Self {
        if len < 2 {
            return PairPlan::None;
        }
        let all = (len as u128) * (len as u128 - 1) / 2;
        if all <= budget as u128 {
            PairPlan::Exhaustive
        } else {
            PairPlan::Sampled { total: budget }
        }
    }

    /// Sizes of the sampled blocks, block `b` drawing from pair stream `b`.
    pub fn blocks(&self) -> impl Iterator<Item = (u64, u64)> {
        let total = match *self {
            PairPlan::Sampled { total } => total,
            _ => 0,
        };
        let count = total.div_ceil(PAIR_BLOCK);
        (0..count).map(move |b| (b, PAIR_BLOCK.min(total - b * PAIR_BLOCK)))
    }
}

/// Sequential reference aggregation of a finished accumulator.
///
/// The parallel driver in the `cenmcc` crate computes exactly the same
/// values.
pub fn summarize(acc: &SummaryAccumulator, cfg: &ExperimentConfig) -> ExperimentSummary {
    let (f, g) = acc.pair_sample();
    let tol = cfg.tie_tolerance;
    let pairs = match PairPlan::for_len(f.len(), cfg.pair_budget) {
        PairPlan::None => None,
        PairPlan::Exhaustive => Some(comparison::pair_counts_for_rows(f, g, tol, 0..f.len())),
        plan @ PairPlan::Sampled { .. } => Some(
            plan.blocks()
                .map(|(b, k)| comparison::sampled_pair_counts(f, g, tol, cfg.seed, b, k))
                .fold(PairCounts::default(), |a, b| a + b),
        ),
    };
    let ratios = acc.ratio_sample();
    let ci = comparison::bootstrap_mean_ci(&ratios, cfg.bootstrap_resamples, cfg.bootstrap_level, cfg.seed).ok();
    acc.finish(pairs, ci, tol)
}

/// Bootstrap base statistics of the retained ratios, `None` if degenerate.
pub fn ratio_base(acc: &SummaryAccumulator) -> Option<(Vec<f64>, MeanSe)> {
    let ratios = acc.ratio_sample();
    let base = MeanSe::of(&ratios).ok()?;
    Some((ratios, base))
}

/// Runs with at least this many matrices must land in the sanity band.
pub const SANITY_MIN_MATRICES: u64 = 10_000;

/// Loose always-on band: `pearson_r >= 0.98` and `mean_ratio` in
/// `[0.99, 1.01]`, enforced once `n_matrices >= 10 000`.
pub fn within_sanity_band(s: &ExperimentSummary) -> bool {
    if s.n_matrices < SANITY_MIN_MATRICES {
        return true;
    }
    let r_ok = s.pearson_r.is_some_and(|r| r >= 0.98);
    let ratio_ok = s.mean_ratio.is_some_and(|m| (0.99..=1.01).contains(&m));
    r_ok && ratio_ok
}
