//! Analytic confusion-matrix families with closed-form measures.
//!
//! Each closed form is an independent route to a value that
//! [`metrics`] also computes directly; [`checks`] pairs
//! them up. Closed forms take already-validated parameters (`n >= 3`,
//! `a >= 1`) and panic otherwise.

use alloc::vec;
use alloc::vec::Vec;

use crate::metrics;
use crate::{ConfusionMatrix, FamilyError};

/// Family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// All ones except entry `(N, 1)` set to `A`.
    Za,
    /// All ones except the last row, which is all `A`.
    Unbalanced,
    /// `T` on the diagonal, `F` elsewhere.
    DiagB,
    /// All ones.
    Uniform,
}

/// One member of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyParams {
    /// See [`FamilyKind::Za`].
    Za {
        /// Class count.
        n: usize,
        /// Corner value.
        a: u64,
    },
    /// See [`FamilyKind::Unbalanced`].
    Unbalanced {
        /// Class count.
        n: usize,
        /// Last-row value.
        a: u64,
    },
    /// See [`FamilyKind::DiagB`].
    DiagB {
        /// Class count.
        n: usize,
        /// Diagonal value.
        t: u64,
        /// Off-diagonal value.
        f: u64,
    },
    /// See [`FamilyKind::Uniform`].
    Uniform {
        /// Class count.
        n: usize,
    },
}

impl FamilyParams {
    /// Which family.
    pub fn kind(&self) -> FamilyKind {
        match self {
            FamilyParams::Za { .. } => FamilyKind::Za,
            FamilyParams::Unbalanced { .. } => FamilyKind::Unbalanced,
            FamilyParams::DiagB { .. } => FamilyKind::DiagB,
            FamilyParams::Uniform { .. } => FamilyKind::Uniform,
        }
    }

    /// Class count.
    pub fn n(&self) -> usize {
        match *self {
            FamilyParams::Za { n, .. }
            | FamilyParams::Unbalanced { n, .. }
            | FamilyParams::DiagB { n, .. }
            | FamilyParams::Uniform { n } => n,
        }
    }

    /// Checks the per-kind constraints.
    pub fn validate(&self) -> Result<(), FamilyError> {
        let n = self.n();
        if n < 3 {
            return Err(FamilyError::TooFewClasses(n));
        }
        match *self {
            FamilyParams::Za { a, .. } | FamilyParams::Unbalanced { a, .. } if a == 0 => {
                Err(FamilyError::ZeroA)
            }
            FamilyParams::DiagB { t: 0, f: 0, .. } => Err(FamilyError::EmptyDiagB),
            _ => Ok(()),
        }
    }
}

/// The literal matrix of a family member.
pub fn make_matrix(p: &FamilyParams) -> Result<ConfusionMatrix, FamilyError> {
    p.validate()?;
    let n = p.n();
    let mut e = vec![1u64; n * n];
    match *p {
        FamilyParams::Za { a, .. } => e[(n - 1) * n] = a,
        FamilyParams::Unbalanced { a, .. } => e[(n - 1) * n..].fill(a),
        FamilyParams::DiagB { t, f, .. } => {
            for i in 0..n {
                for j in 0..n {
                    e[i * n + j] = if i == j { t } else { f };
                }
            }
        }
        FamilyParams::Uniform { .. } => {}
    }
    Ok(ConfusionMatrix::from_row_major(n, e)?)
}

fn log_base(x: f64, n: usize) -> f64 {
    libm::log(x) / libm::log((2 * n - 2) as f64)
}

/// `x log_{2N−2} x` with `0 log 0 = 0`.
fn xlog(x: f64, n: usize) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * log_base(x, n)
    }
}

fn check_n(n: usize) {
    assert!(n >= 3, "closed forms need n >= 3, got {n}");
}

/// `ACC(Z_A) = N / (N² + A − 1)`.
pub fn acc_za_closed(n: usize, a: u64) -> f64 {
    check_n(n);
    let (n, a) = (n as f64, a as f64);
    n / (n * n + a - 1.0)
}

/// `MCC(Z_A) = −(A − 1) / ((N − 1)(N² + 2A − 2))`.
///
/// Decreasing in `A` towards `−1/(2(N − 1))`.
pub fn mcc_za_closed(n: usize, a: u64) -> f64 {
    check_n(n);
    assert!(a >= 1);
    let (n, a) = (n as f64, a as f64);
    -(a - 1.0) / ((n - 1.0) * (n * n + 2.0 * a - 2.0))
}

/// `CEN(Z_A)`; decreasing in `A` towards 0.
pub fn cen_za_closed(n: usize, a: u64) -> f64 {
    check_n(n);
    assert!(a >= 1);
    let (nf, af) = (n as f64, a as f64);
    let bracket = (nf - 2.0) * (nf - 1.0) * log_base(2.0 * nf, n)
        + (2.0 * nf + af - 3.0) * log_base(2.0 * nf + af - 1.0, n)
        - xlog(af, n);
    bracket / (nf * nf + af - 1.0)
}

/// CEN of the unbalanced random-classification family; decreasing in `A`.
pub fn cen_unbalanced_closed(n: usize, a: u64) -> f64 {
    check_n(n);
    assert!(a >= 1);
    let (nf, af) = (n as f64, a as f64);
    let bracket = (2.0 * nf + af - 3.0) * log_base(2.0 * nf + af - 1.0, n) - 2.0 * xlog(af, n)
        + (af + 1.0) * log_base(nf + nf * af + af - 1.0, n);
    (nf - 1.0) / (2.0 * nf * (nf + af - 1.0)) * bracket
}

/// Limit of [`cen_unbalanced_closed`] as `A → ∞`:
/// `((N − 1) / 2N) · log_{2N−2}(N + 1)`.
pub fn cen_unbalanced_limit(n: usize) -> f64 {
    check_n(n);
    let nf = n as f64;
    (nf - 1.0) / (2.0 * nf) * log_base(nf + 1.0, n)
}

/// `MCC(B) = (T² + (N−2)TF − (N−1)F²) / (T + (N−1)F)²`.
pub fn mcc_b_closed(n: usize, t: u64, f: u64) -> f64 {
    check_n(n);
    if f == 0 {
        return 1.0;
    }
    let (nf, t, f) = (n as f64, t as f64, f as f64);
    let row = t + (nf - 1.0) * f;
    (t * t + (nf - 2.0) * t * f - (nf - 1.0) * f * f) / (row * row)
}

/// `CEN(B) = ((N−1)F / (T+(N−1)F)) · log_{2N−2}(2(T+(N−1)F)/F)`.
pub fn cen_b_closed(n: usize, t: u64, f: u64) -> f64 {
    check_n(n);
    if f == 0 {
        return 0.0;
    }
    let (nf, tf, ff) = (n as f64, t as f64, f as f64);
    let row = tf + (nf - 1.0) * ff;
    (nf - 1.0) * ff / row * log_base(2.0 * row / ff, n)
}

/// CEN of the B family rebuilt from its MCC:
/// `(1 − MCC)(1 + log_{2N−2}((T+(N−1)F)/((N−1)F)))(1 − 1/N)`.
pub fn cen_identity_b(n: usize, t: u64, f: u64) -> f64 {
    check_n(n);
    if f == 0 {
        return 0.0;
    }
    let (nf, tf, ff) = (n as f64, t as f64, f as f64);
    let off = (nf - 1.0) * ff;
    (1.0 - mcc_b_closed(n, t, f)) * (1.0 + log_base((tf + off) / off, n)) * (1.0 - 1.0 / nf)
}

/// CEN of the all-equal matrix, `(1 − 1/N) log_{2N−2} 2N`.
pub fn cen_uniform(n: usize) -> f64 {
    check_n(n);
    let nf = n as f64;
    (1.0 - 1.0 / nf) * log_base(2.0 * nf, n)
}

/// One closed-form value next to its direct evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FormCheck {
    /// Quantity name, e.g. `"mcc"`.
    pub quantity: &'static str,
    /// Closed-form value.
    pub closed: f64,
    /// Value from [`metrics`] on the family matrix.
    pub direct: f64,
}

impl FormCheck {
    /// `|closed − direct|`.
    pub fn abs_diff(&self) -> f64 {
        libm::fabs(self.closed - self.direct)
    }
}

/// Every closed form that applies to `p`, paired with its direct value.
pub fn checks(p: &FamilyParams) -> Result<Vec<FormCheck>, FamilyError> {
    let c = make_matrix(p)?;
    let (acc, mcc, cen) = (metrics::accuracy(&c), metrics::mcc(&c), metrics::cen(&c));
    let check = |quantity, closed, direct| FormCheck { quantity, closed, direct };
    Ok(match *p {
        FamilyParams::Za { n, a } => vec![
            check("acc", acc_za_closed(n, a), acc),
            check("mcc", mcc_za_closed(n, a), mcc),
            check("cen", cen_za_closed(n, a), cen),
        ],
        FamilyParams::Unbalanced { n, a } => vec![
            check("mcc", 0.0, mcc),
            check("cen", cen_unbalanced_closed(n, a), cen),
        ],
        FamilyParams::DiagB { n, t, f } => vec![
            check("mcc", mcc_b_closed(n, t, f), mcc),
            check("cen", cen_b_closed(n, t, f), cen),
            check("cen_from_mcc", cen_identity_b(n, t, f), cen),
        ],
        FamilyParams::Uniform { n } => {
            vec![check("mcc", 0.0, mcc), check("cen", cen_uniform(n), cen)]
        }
    })
}
