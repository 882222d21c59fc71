use core::fmt;

/// Validation failures when building a [`ConfusionMatrix`](crate::ConfusionMatrix).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixError {
    /// Fewer than two classes.
    TooFewClasses(usize),
    /// Row `row` has `len` entries where `expected` were required.
    NotSquare {
        /// 0-based row index.
        row: usize,
        /// Entries found in that row.
        len: usize,
        /// Side of the matrix.
        expected: usize,
    },
    /// An entry is below zero.
    NegativeEntry {
        /// 0-based row index.
        row: usize,
        /// 0-based column index.
        col: usize,
        /// Offending value.
        value: i64,
    },
    /// Every entry is zero.
    ZeroTotal,
    /// True and predicted label sequences differ in length.
    LengthMismatch {
        /// Number of true labels.
        true_len: usize,
        /// Number of predicted labels.
        predicted_len: usize,
    },
    /// No labels were supplied.
    EmptyLabels,
    /// A label is not a valid class index.
    LabelOutOfRange {
        /// Position in the label sequence.
        position: usize,
        /// Offending label.
        label: usize,
        /// Class count.
        n: usize,
    },
    /// Scaling by zero.
    ZeroScale,
    /// A count or the total does not fit in 64 bits.
    Overflow,
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::TooFewClasses(n) => write!(f, "need at least 2 classes, got {n}"),
            MatrixError::NotSquare { row, len, expected } => write!(
                f,
                "matrix is not square: row {row} has {len} entries, expected {expected}"
            ),
            MatrixError::NegativeEntry { row, col, value } => {
                write!(f, "negative entry {value} at ({row}, {col})")
            }
            MatrixError::ZeroTotal => f.write_str("matrix total is zero"),
            MatrixError::LengthMismatch { true_len, predicted_len } => write!(
                f,
                "label length mismatch: {true_len} true labels, {predicted_len} predicted"
            ),
            MatrixError::EmptyLabels => f.write_str("no labels supplied"),
            MatrixError::LabelOutOfRange { position, label, n } => {
                write!(f, "label {label} at position {position} is outside 0..{n}")
            }
            MatrixError::ZeroScale => f.write_str("scale factor must be at least 1"),
            MatrixError::Overflow => f.write_str("count overflows 64 bits"),
        }
    }
}

/// Errors from measures with a restricted domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricError {
    /// The measure is only defined for three or more classes.
    NeedsMultiClass(usize),
    /// Binary closed forms need at least one sample.
    EmptyBinary,
}

impl fmt::Display for MetricError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricError::NeedsMultiClass(n) => {
                write!(f, "measure requires at least 3 classes, got {n}")
            }
            MetricError::EmptyBinary => f.write_str("binary counts sum to zero"),
        }
    }
}

/// Invalid analytic family parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyError {
    /// Families are defined for three or more classes.
    TooFewClasses(usize),
    /// `a` must be at least 1.
    ZeroA,
    /// `t + f` must be at least 1.
    EmptyDiagB,
    /// The resulting matrix would overflow.
    Matrix(MatrixError),
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::TooFewClasses(n) => write!(f, "families need n >= 3, got {n}"),
            FamilyError::ZeroA => f.write_str("parameter a must be >= 1"),
            FamilyError::EmptyDiagB => f.write_str("parameters t and f cannot both be 0"),
            FamilyError::Matrix(e) => write!(f, "{e}"),
        }
    }
}

impl From<MatrixError> for FamilyError {
    fn from(e: MatrixError) -> Self {
        FamilyError::Matrix(e)
    }
}

/// Errors from comparison statistics.
#[derive(Debug, Clone, PartialEq)]
pub enum ComparisonError {
    /// The two value sequences differ in length.
    LengthMismatch(usize, usize),
    /// Not enough values for the statistic.
    TooFewValues {
        /// Values supplied.
        got: usize,
        /// Minimum required.
        need: usize,
    },
    /// A sequence has zero variance.
    ZeroVariance,
    /// Fixed-row-sum enumeration needs at least two rows.
    TooFewRows(usize),
    /// All row sums are zero.
    ZeroTotal,
    /// Negative tie tolerance.
    NegativeTolerance,
    /// Confidence level outside (0, 1).
    InvalidLevel(f64),
    /// Fewer bootstrap resamples than allowed.
    TooFewResamples(usize),
}

impl fmt::Display for ComparisonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComparisonError::LengthMismatch(a, b) => {
                write!(f, "sequences differ in length: {a} vs {b}")
            }
            ComparisonError::TooFewValues { got, need } => {
                write!(f, "need at least {need} values, got {got}")
            }
            ComparisonError::ZeroVariance => f.write_str("values have zero variance"),
            ComparisonError::TooFewRows(n) => write!(f, "need at least 2 row sums, got {n}"),
            ComparisonError::ZeroTotal => f.write_str("row sums add up to zero"),
            ComparisonError::NegativeTolerance => f.write_str("tie tolerance must be >= 0"),
            ComparisonError::InvalidLevel(l) => write!(f, "confidence level {l} not in (0, 1)"),
            ComparisonError::TooFewResamples(b) => {
                write!(f, "need at least 100 bootstrap resamples, got {b}")
            }
        }
    }
}

/// Invalid experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    /// Dimension range is empty or starts below 3.
    Dimensions {
        /// Lower bound.
        min: usize,
        /// Upper bound.
        max: usize,
    },
    /// ρ range outside `0 < min <= max <= 1`.
    Rho {
        /// Lower bound.
        min: f64,
        /// Upper bound.
        max: f64,
    },
    /// Diagonal bound below 1.
    DiagMax,
    /// Off-diagonal bound `floor(diag_max * rho_min)` is below 1.
    OffDiagonalBound,
    /// Invalid bootstrap settings.
    Bootstrap(ComparisonError),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Dimensions { min, max } => {
                write!(f, "dimension range {min}..={max} invalid (need 3 <= min <= max)")
            }
            ConfigError::Rho { min, max } => {
                write!(f, "rho range [{min}, {max}] invalid (need 0 < min <= max <= 1)")
            }
            ConfigError::DiagMax => f.write_str("diag_max must be >= 1"),
            ConfigError::OffDiagonalBound => {
                f.write_str("floor(diag_max * rho_min) must be >= 1")
            }
            ConfigError::Bootstrap(e) => write!(f, "bootstrap: {e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for MatrixError {}
#[cfg(feature = "std")]
impl std::error::Error for MetricError {}
#[cfg(feature = "std")]
impl std::error::Error for FamilyError {}
#[cfg(feature = "std")]
impl std::error::Error for ComparisonError {}
#[cfg(feature = "std")]
impl std::error::Error for ConfigError {}
