//! Measure comparison over every matrix with given row sums.

use std::fmt;
use std::str::FromStr;

use cenmcc_core::comparison::{self, ComparisonResult};
use cenmcc_core::{metrics, ComparisonError, ConfusionMatrix};

use crate::runner::parallel_pair_counts;

/// Default cap on the number of unordered pairs.
pub const DEFAULT_PAIR_BUDGET: u64 = 100_000_000;

/// A measure oriented so that larger is better.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// Accuracy.
    Acc,
    /// Matthews Correlation Coefficient.
    Mcc,
    /// Confusion Entropy, negated.
    Cen,
}

impl Measure {
    /// Oriented value on `c`.
    pub fn oriented(self, c: &ConfusionMatrix) -> f64 {
        match self {
            Measure::Acc => metrics::accuracy(c),
            Measure::Mcc => metrics::mcc(c),
            Measure::Cen => -metrics::cen(c),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Measure::Acc => "acc",
            Measure::Mcc => "mcc",
            Measure::Cen => "cen",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "acc" => Ok(Measure::Acc),
            "mcc" => Ok(Measure::Mcc),
            "cen" => Ok(Measure::Cen),
            other => Err(format!("unknown measure {other:?} (expected acc, mcc or cen)")),
        }
    }
}

/// `f-g`: degrees of `f` over `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasurePair {
    /// Measure whose discriminancy is reported.
    pub f: Measure,
    /// Reference measure.
    pub g: Measure,
}

impl FromStr for MeasurePair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (f, g) = s.split_once('-').ok_or_else(|| format!("expected f-g, got {s:?}"))?;
        Ok(MeasurePair { f: f.parse()?, g: g.parse()? })
    }
}

impl fmt::Display for MeasurePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.f, self.g)
    }
}

/// Failure of [`enumerate_compare`].
#[derive(Debug, thiserror::Error)]
pub enum CompareError {
    /// Invalid row sums or tolerance.
    #[error(transparent)]
    Invalid(#[from] ComparisonError),
    /// Too many pairs.
    #[error("{pairs} pairs over {domain} matrices exceed the budget of {budget}")]
    Budget {
        /// Domain size, saturated at `u128::MAX`.
        domain: u128,
        /// Pair count, saturated.
        pairs: u128,
        /// Configured budget.
        budget: u64,
    },
}

/// Result of an enumerated comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerateReport {
    /// Matrices enumerated.
    pub domain_size: u64,
    /// Pair statistics.
    pub result: ComparisonResult,
}

/// Enumerates every matrix with the given row sums and compares the two
/// measures over all unordered pairs. Pair counting runs on the current
/// rayon pool.
pub fn enumerate_compare(
    row_sums: &[u64],
    pair: MeasurePair,
    tie_tolerance: f64,
    pair_budget: u64,
) -> Result<EnumerateReport, CompareError> {
    if !(tie_tolerance >= 0.0) {
        return Err(ComparisonError::NegativeTolerance.into());
    }
    let matrices = comparison::enumerate_fixed_row_sums(row_sums)?;
    let domain = comparison::fixed_row_sum_count(row_sums).unwrap_or(u128::MAX);
    let pairs = domain.saturating_mul(domain.saturating_sub(1)) / 2;
    if pairs > pair_budget as u128 {
        return Err(CompareError::Budget { domain, pairs, budget: pair_budget });
    }
    let (f, g): (Vec<f64>, Vec<f64>) = matrices
        .map(|c| (pair.f.oriented(&c), pair.g.oriented(&c)))
        .unzip();
    let counts = parallel_pair_counts(&f, &g, tie_tolerance);
    Ok(EnumerateReport {
        domain_size: f.len() as u64,
        result: ComparisonResult::from_counts(counts, tie_tolerance),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CEN_MCC: MeasurePair = MeasurePair { f: Measure::Cen, g: Measure::Mcc };

    #[test]
    fn parse_pairs() {
        assert_eq!("cen-mcc".parse::<MeasurePair>().unwrap(), CEN_MCC);
        assert_eq!("MCC-acc".parse::<MeasurePair>().unwrap().to_string(), "mcc-acc");
        assert!("cen".parse::<MeasurePair>().is_err());
        assert!("cen-auc".parse::<MeasurePair>().is_err());
    }

    #[test]
    fn tiny_domain_by_hand() {
        // rows (1,1): [[1,0],[1,0]], [[1,0],[0,1]], [[0,1],[1,0]], [[0,1],[0,1]]
        // mcc 0, 1, -1, 0 and cen c, 0, 1, c with the same c for both
        // single-column matrices: every separated pair agrees, one pair ties on both
        let r = enumerate_compare(&[1, 1], CEN_MCC, 1e-12, 100).unwrap();
        assert_eq!(r.domain_size, 4);
        assert_eq!(r.result.counts(), comparison::PairCounts { p: 0, q: 0, r: 5, s: 0 });
        assert_eq!(r.result.consistency, Some(1.0));
        assert_eq!(r.result.discriminancy, None);
    }

    #[test]
    fn budget_guard() {
        match enumerate_compare(&[50, 50, 50], CEN_MCC, 1e-12, DEFAULT_PAIR_BUDGET) {
            Err(CompareError::Budget { domain, .. }) => assert_eq!(domain, 1326u128.pow(3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            enumerate_compare(&[3], CEN_MCC, 1e-12, 10),
            Err(CompareError::Invalid(ComparisonError::TooFewRows(1)))
        ));
    }
}
