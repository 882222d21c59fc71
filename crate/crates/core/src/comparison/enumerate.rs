use alloc::vec::Vec;

use crate::{ComparisonError, ConfusionMatrix};

/// Every confusion matrix whose row `i` sums to `row_sums[i]`, each exactly
/// once.
///
/// Rows range independently over the weak compositions of their sum into
/// `N = row_sums.len()` parts, so the domain has
/// `Π_i C(row_sums[i] + N − 1, N − 1)` members (see [`fixed_row_sum_count`]).
pub fn enumerate_fixed_row_sums(row_sums: &[u64]) -> Result<FixedRowSums, ComparisonError> {
    let n = row_sums.len();
    if n < 2 {
        return Err(ComparisonError::TooFewRows(n));
    }
    if row_sums.iter().all(|&k| k == 0) {
        return Err(ComparisonError::ZeroTotal);
    }
    let mut current = alloc::vec![0u64; n * n];
    for (i, &k) in row_sums.iter().enumerate() {
        current[i * n] = k;
    }
    Ok(FixedRowSums { n, current, done: false })
}

/// Size of the fixed-row-sum domain, `None` if it exceeds `u128`.
pub fn fixed_row_sum_count(row_sums: &[u64]) -> Option<u128> {
    let n = row_sums.len() as u128;
    row_sums.iter().try_fold(1u128, |acc, &k| {
        let c = binomial(k as u128 + n - 1, n - 1)?;
        acc.checked_mul(c)
    })
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        // r * (n - i) is divisible by i + 1 at every step.
        r = r.checked_mul(n - i)? / (i + 1);
    }
    Some(r)
}

/// Iterator returned by [`enumerate_fixed_row_sums`].
#[derive(Debug, Clone)]
pub struct FixedRowSums {
    n: usize,
    current: Vec<u64>,
    done: bool,
}

/// Steps `row` to the next weak composition in decreasing lexicographic
/// order, returning false (and resetting to the first) after the last.
fn next_composition(row: &mut [u64]) -> bool {
    let last = row.len() - 1;
    match (0..last).rev().find(|&i| row[i] > 0) {
        Some(i) => {
            let tail: u64 = row[i + 1..].iter().sum();
            row[i] -= 1;
            row[i + 1..].fill(0);
            row[i + 1] = tail + 1;
            true
        }
        None => {
            let k = row[last];
            row.fill(0);
            row[0] = k;
            false
        }
    }
}

impl Iterator for FixedRowSums {
    type Item = ConfusionMatrix;

    fn next(&mut self) -> Option<ConfusionMatrix> {
        if self.done {
            return None;
        }
        let out = ConfusionMatrix::from_row_major(self.n, self.current.clone())
            .expect("row sums have a positive total");
        // odometer over rows, last row fastest
        self.done = true;
        for row in self.current.chunks_exact_mut(self.n).rev() {
            if next_composition(row) {
                self.done = false;
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    #[test]
    fn small_domain_by_hand() {
        let all: Vec<_> = enumerate_fixed_row_sums(&[0, 1]).unwrap().map(|c| c.entries().to_vec()).collect();
        assert_eq!(all, vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
    }

    #[test]
    fn example_domain_size() {
        assert_eq!(enumerate_fixed_row_sums(&[2, 4, 3]).unwrap().count(), 900);
        assert_eq!(fixed_row_sum_count(&[2, 4, 3]), Some(900));
    }

    #[test]
    fn members_are_distinct_with_right_sums() {
        let rows = [3, 0, 2, 1];
        let seen: BTreeSet<Vec<u64>> = enumerate_fixed_row_sums(&rows)
            .unwrap()
            .inspect(|c| assert_eq!(c.marginals().row_sums, rows))
            .map(|c| c.entries().to_vec())
            .collect();
        assert_eq!(seen.len() as u128, fixed_row_sum_count(&rows).unwrap());
    }

    #[test]
    fn errors() {
        assert_eq!(enumerate_fixed_row_sums(&[1]).unwrap_err(), ComparisonError::TooFewRows(1));
        assert_eq!(enumerate_fixed_row_sums(&[]).unwrap_err(), ComparisonError::TooFewRows(0));
        assert_eq!(enumerate_fixed_row_sums(&[0, 0]).unwrap_err(), ComparisonError::ZeroTotal);
    }

    #[test]
    fn count_overflow_is_none() {
        assert_eq!(fixed_row_sum_count(&[u64::MAX / 4; 12]), None);
        assert_eq!(fixed_row_sum_count(&[50, 50, 50]), Some(1326u128.pow(3)));
    }
}
