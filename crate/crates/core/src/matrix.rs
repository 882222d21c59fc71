use alloc::vec;
use alloc::vec::Vec;

use crate::MatrixError;

/// Square table of counts, entry `(i, j)` being the number of samples of
/// true class `i` predicted as class `j`.
///
/// Always at least 2×2 with a positive total. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConfusionMatrix {
    n: usize,
    /// Row-major, `entries[i * n + j]`.
    entries: Vec<u64>,
}

/// Exact integer sums of a confusion matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marginals {
    /// Per true class.
    pub row_sums: Vec<u64>,
    /// Per predicted class.
    pub col_sums: Vec<u64>,
    /// Correctly classified samples.
    pub trace: u64,
    /// All samples.
    pub total: u64,
}

impl ConfusionMatrix {
    /// Builds a matrix from signed rows, rejecting anything that is not a
    /// valid confusion matrix.
    pub fn from_entries<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n < 2 {
            return Err(MatrixError::TooFewClasses(n));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(MatrixError::NotSquare { row: i, len: row.len(), expected: n });
            }
            for (j, &value) in row.iter().enumerate() {
                if value < 0 {
                    return Err(MatrixError::NegativeEntry { row: i, col: j, value });
                }
                entries.push(value as u64);
            }
        }
        Self::from_row_major(n, entries)
    }

    /// Builds a matrix from `n * n` row-major counts.
    pub fn from_row_major(n: usize, entries: Vec<u64>) -> Result<Self, MatrixError> {
        if n < 2 {
            return Err(MatrixError::TooFewClasses(n));
        }
        if entries.len() != n * n {
            return Err(MatrixError::NotSquare {
                row: entries.len() / n,
                len: entries.len() % n,
                expected: n,
            });
        }
        let mut total: u64 = 0;
        for &e in &entries {
            total = total.checked_add(e).ok_or(MatrixError::Overflow)?;
        }
        if total == 0 {
            return Err(MatrixError::ZeroTotal);
        }
        Ok(ConfusionMatrix { n, entries })
    }

    /// Tallies paired labels. Labels are 0-based class indices in `0..n`.
    pub fn from_label_pairs(
        true_labels: &[usize],
        predicted_labels: &[usize],
        n: usize,
    ) -> Result<Self, MatrixError> {
        if n < 2 {
            return Err(MatrixError::TooFewClasses(n));
        }
        if true_labels.len() != predicted_labels.len() {
            return Err(MatrixError::LengthMismatch {
                true_len: true_labels.len(),
                predicted_len: predicted_labels.len(),
            });
        }
        if true_labels.is_empty() {
            return Err(MatrixError::EmptyLabels);
        }
        let mut entries = vec![0u64; n * n];
        for (position, (&t, &p)) in true_labels.iter().zip(predicted_labels).enumerate() {
            for label in [t, p] {
                if label >= n {
                    return Err(MatrixError::LabelOutOfRange { position, label, n });
                }
            }
            entries[t * n + p] += 1;
        }
        Self::from_row_major(n, entries)
    }

    /// Multiplies every entry by `m >= 1`.
    pub fn scale(&self, m: u64) -> Result<Self, MatrixError> {
        if m == 0 {
            return Err(MatrixError::ZeroScale);
        }
        let entries = self
            .entries
            .iter()
            .map(|&e| e.checked_mul(m).ok_or(MatrixError::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_row_major(self.n, entries)
    }

    /// Number of classes.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`.
    ///
    /// Panics if either index is out of range.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of range for n = {}", self.n);
        self.entries[i * self.n + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Iterates over rows.
    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[u64]> + '_ {
        self.entries.chunks_exact(self.n)
    }

    /// Sum of all entries.
    pub fn total(&self) -> u64 {
        self.entries.iter().sum()
    }

    /// Sum of the diagonal.
    pub fn trace(&self) -> u64 {
        (0..self.n).map(|k| self.entries[k * self.n + k]).sum()
    }

    /// True when every off-diagonal entry is zero.
    pub fn is_diagonal(&self) -> bool {
        self.rows()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &e)| i == j || e == 0))
    }

    /// Row sums, column sums, trace and total.
    pub fn marginals(&self) -> Marginals {
        let n = self.n;
        let mut row_sums = vec![0u64; n];
        let mut col_sums = vec![0u64; n];
        for (i, row) in self.rows().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                row_sums[i] += e;
                col_sums[j] += e;
            }
        }
        Marginals { row_sums, col_sums, trace: self.trace(), total: self.total() }
    }
}
