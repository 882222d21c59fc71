//! Confusion-matrix CSV: `N` lines of `N` comma-separated base-10
//! nonnegative integers, no header, row `i` holding true class `i`. Label
//! files hold one 1-based `true,predicted` pair per line.

use std::io::{self, Read, Write};

use cenmcc_core::{ConfusionMatrix, MatrixError};

/// Failure reading a matrix file. Line numbers are 1-based.
#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    /// No rows at all.
    #[error("empty input")]
    Empty,
    /// A field is not a nonnegative base-10 integer.
    #[error("line {line}: field {field} ({token:?}) is not a nonnegative integer")]
    BadToken {
        /// Line number.
        line: u64,
        /// 1-based field position.
        field: usize,
        /// Offending text.
        token: String,
    },
    /// Row length differs from the first row.
    #[error("line {line}: {found} fields, expected {expected}")]
    Ragged {
        /// Line number.
        line: u64,
        /// Fields on that line.
        found: usize,
        /// Fields on the first line.
        expected: usize,
    },
    /// Number of rows differs from the number of columns.
    #[error("{rows} rows for {cols} columns; matrix must be square")]
    NotSquare {
        /// Rows read.
        rows: usize,
        /// Columns per row.
        cols: usize,
    },
    /// Class label outside `1..=n`.
    #[error("line {line}: label {label} outside 1..={n}")]
    LabelOutOfRange {
        /// Line number.
        line: u64,
        /// Offending label.
        label: u64,
        /// Class count.
        n: usize,
    },
    /// Well-formed but not a valid confusion matrix.
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    /// Underlying reader failure.
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn parse_count(token: &str) -> Option<u64> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    token.parse().ok()
}

/// Parses one matrix.
pub fn read_csv<R: Read>(source: R) -> Result<ConfusionMatrix, CsvError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut entries = Vec::new();
    let mut cols = 0;
    let mut rows = 0;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(rows as u64 + 1, |p| p.line());
        if rows == 0 {
            cols = record.len();
        } else if record.len() != cols {
            return Err(CsvError::Ragged { line, found: record.len(), expected: cols });
        }
        for (k, token) in record.iter().enumerate() {
            let value = parse_count(token).ok_or_else(|| CsvError::BadToken {
                line,
                field: k + 1,
                token: token.to_string(),
            })?;
            entries.push(value);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(CsvError::Empty);
    }
    if rows != cols {
        return Err(CsvError::NotSquare { rows, cols });
    }
    Ok(ConfusionMatrix::from_row_major(rows, entries)?)
}

/// Parses `true,predicted` label lines into an `n`-class matrix.
///
/// Labels in the file are 1-based (`1..=n`); the matrix is indexed from 0,
/// so label `k` lands in row or column `k - 1`.
pub fn read_label_pairs<R: Read>(source: R, n: usize) -> Result<ConfusionMatrix, CsvError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let (mut truth, mut predicted) = (Vec::new(), Vec::new());
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(truth.len() as u64 + 1, |p| p.line());
        if record.len() != 2 {
            return Err(CsvError::Ragged { line, found: record.len(), expected: 2 });
        }
        for (k, token) in record.iter().enumerate() {
            let label = parse_count(token).ok_or_else(|| CsvError::BadToken {
                line,
                field: k + 1,
                token: token.to_string(),
            })?;
            if label == 0 || label > n as u64 {
                return Err(CsvError::LabelOutOfRange { line, label, n });
            }
            let zero_based = (label - 1) as usize;
            if k == 0 {
                truth.push(zero_based);
            } else {
                predicted.push(zero_based);
            }
        }
    }
    if truth.is_empty() {
        return Err(CsvError::Empty);
    }
    Ok(ConfusionMatrix::from_label_pairs(&truth, &predicted, n)?)
}

/// Writes `c` in the same format, one trailing newline.
pub fn write_csv<W: Write>(c: &ConfusionMatrix, mut sink: W) -> io::Result<()> {
    for row in c.rows() {
        let line: Vec<String> = row.iter().map(u64::to_string).collect();
        writeln!(sink, "{}", line.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_identity() {
        let c = read_csv("1,0\n0,1".as_bytes()).unwrap();
        assert_eq!(c.entries(), &[1, 0, 0, 1]);
        let c = read_csv("1, 0\n0 ,1\n".as_bytes()).unwrap();
        assert_eq!(c.entries(), &[1, 0, 0, 1]);
    }

    #[test]
    fn rejects_ragged_rows() {
        match read_csv("1,2\n3".as_bytes()) {
            Err(CsvError::Ragged { line: 2, found: 1, expected: 2 }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_tokens() {
        for (text, line) in [("1,x\n0,1", 1), ("1,0\n-1,1", 2), ("1,0\n1.5,1", 2), ("1,0\n,1", 2)] {
            match read_csv(text.as_bytes()) {
                Err(CsvError::BadToken { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn rejects_empty_and_non_square() {
        assert!(matches!(read_csv("".as_bytes()), Err(CsvError::Empty)));
        assert!(matches!(read_csv("1,2,3\n4,5,6".as_bytes()), Err(CsvError::NotSquare { .. })));
        assert!(matches!(read_csv("0,0\n0,0".as_bytes()), Err(CsvError::Matrix(MatrixError::ZeroTotal))));
        assert!(matches!(read_csv("7".as_bytes()), Err(CsvError::Matrix(MatrixError::TooFewClasses(1)))));
    }

    #[test]
    fn label_pairs_are_one_based() {
        let c = read_label_pairs("1,1\n2,1\n3,3\n3,2\n".as_bytes(), 3).unwrap();
        assert_eq!(c.entries(), &[1, 0, 0, 1, 0, 0, 0, 1, 1]);
        match read_label_pairs("1,1\n0,2\n".as_bytes(), 3) {
            Err(CsvError::LabelOutOfRange { line: 2, label: 0, n: 3 }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            read_label_pairs("1,4".as_bytes(), 3),
            Err(CsvError::LabelOutOfRange { label: 4, .. })
        ));
        assert!(matches!(read_label_pairs("1,2,3".as_bytes(), 3), Err(CsvError::Ragged { .. })));
        assert!(matches!(read_label_pairs("".as_bytes(), 3), Err(CsvError::Empty)));
    }

    #[test]
    fn write_format() {
        let c = ConfusionMatrix::from_row_major(2, vec![3, 10, 0, 4]).unwrap();
        let mut out = Vec::new();
        write_csv(&c, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "3,10\n0,4\n");
    }
}
