//! Statistics for comparing measures: degrees of consistency and
//! discriminancy, Pearson correlation, a studentized bootstrap interval for
//! the mean, and exhaustive enumeration of matrices with fixed row sums.

pub(crate) mod bootstrap;
mod correlation;
mod degrees;
mod enumerate;

pub use bootstrap::{bootstrap_mean_ci, studentized_replicate, BootstrapCi, MeanSe};
pub use correlation::{pearson_correlation, PearsonAccumulator};
pub use degrees::{
    degrees, pair_counts_for_rows, sampled_pair_counts, ComparisonResult, PairCounts,
    DEFAULT_TIE_TOLERANCE,
};
pub use enumerate::{enumerate_fixed_row_sums, fixed_row_sum_count, FixedRowSums};
