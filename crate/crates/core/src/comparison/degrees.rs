use core::ops::{Add, AddAssign, Range};

use rand::Rng;

use crate::rng::{self, Domain};
use crate::ComparisonError;

/// Differences at or below this magnitude count as ties.
pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-12;

/// Pair tallies for measures `f` and `g` over unordered object pairs.
///
/// * `p`: `f` separates the pair, `g` ties it
/// * `q`: `f` ties, `g` separates
/// * `r`: both separate, in the same direction
/// * `s`: both separate, in opposite directions
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PairCounts {
    /// `|P|`
    pub p: u64,
    /// `|Q|`
    pub q: u64,
    /// `|R|`
    pub r: u64,
    /// `|S|`
    pub s: u64,
}

impl PairCounts {
    /// Tallies one pair given `f(a) − f(b)` and `g(a) − g(b)`.
    #[inline]
    pub fn record(&mut self, df: f64, dg: f64, tol: f64) {
        let f_tie = libm::fabs(df) <= tol;
        let g_tie = libm::fabs(dg) <= tol;
        match (f_tie, g_tie) {
            (true, true) => {}
            (false, true) => self.p += 1,
            (true, false) => self.q += 1,
            (false, false) if (df > 0.0) == (dg > 0.0) => self.r += 1,
            (false, false) => self.s += 1,
        }
    }

    /// Same counts with the roles of `f` and `g` exchanged.
    pub fn swapped(self) -> Self {
        PairCounts { p: self.q, q: self.p, ..self }
    }
}

impl Add for PairCounts {
    type Output = PairCounts;

    fn add(self, o: PairCounts) -> PairCounts {
        PairCounts { p: self.p + o.p, q: self.q + o.q, r: self.r + o.r, s: self.s + o.s }
    }
}

impl AddAssign for PairCounts {
    fn add_assign(&mut self, o: PairCounts) {
        *self = *self + o;
    }
}

/// Degrees of discriminancy and consistency for a measure pair.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ComparisonResult {
    /// `|P|`
    pub p_count: u64,
    /// `|Q|`
    pub q_count: u64,
    /// `|R|`
    pub r_count: u64,
    /// `|S|`
    pub s_count: u64,
    /// `|P| / |Q|`, undefined when no pair is tied by `f` only.
    pub discriminancy: Option<f64>,
    /// `|R| / (|R| + |S|)`, undefined when no pair is separated by both.
    pub consistency: Option<f64>,
    /// Tie threshold used.
    pub tie_tolerance: f64,
}

impl ComparisonResult {
    /// Derives both degrees from raw counts.
    pub fn from_counts(c: PairCounts, tie_tolerance: f64) -> Self {
        ComparisonResult {
            p_count: c.p,
            q_count: c.q,
            r_count: c.r,
            s_count: c.s,
            discriminancy: (c.q > 0).then(|| c.p as f64 / c.q as f64),
            consistency: (c.r + c.s > 0).then(|| c.r as f64 / (c.r + c.s) as f64),
            tie_tolerance,
        }
    }

    /// The raw counts.
    pub fn counts(&self) -> PairCounts {
        PairCounts { p: self.p_count, q: self.q_count, r: self.r_count, s: self.s_count }
    }
}

fn check_inputs(f: &[f64], g: &[f64], tol: f64) -> Result<(), ComparisonError> {
    if f.len() != g.len() {
        return Err(ComparisonError::LengthMismatch(f.len(), g.len()));
    }
    if f.is_empty() {
        return Err(ComparisonError::TooFewValues { got: 0, need: 1 });
    }
    if !(tol >= 0.0) {
        return Err(ComparisonError::NegativeTolerance);
    }
    Ok(())
}

/// Compares `f` and `g` over every unordered pair of objects.
///
/// Both sequences must already be oriented so that larger is better; negate
/// a smaller-is-better measure such as CEN before calling.
pub fn degrees(f: &[f64], g: &[f64], tie_tolerance: f64) -> Result<ComparisonResult, ComparisonError> {
    check_inputs(f, g, tie_tolerance)?;
    let counts = pair_counts_for_rows(f, g, tie_tolerance, 0..f.len());
    Ok(ComparisonResult::from_counts(counts, tie_tolerance))
}

/// Counts over pairs `(i, j)` with `i` in `rows` and `j > i`.
///
/// Disjoint row ranges covering `0..len` add up to the full tally, so this
/// is the unit of work for parallel callers. Lengths must match.
pub fn pair_counts_for_rows(f: &[f64], g: &[f64], tol: f64, rows: Range<usize>) -> PairCounts {
    assert_eq!(f.len(), g.len());
    let mut c = PairCounts::default();
    for i in rows {
        let (fi, gi) = (f[i], g[i]);
        for j in i + 1..f.len() {
            c.record(fi - f[j], gi - g[j], tol);
        }
    }
    c
}

/// Counts over `pairs` uniformly sampled pairs of distinct objects.
///
/// Draws come from stream `block` of `seed`; summing blocks `0..b` gives a
/// result that does not depend on how the blocks were scheduled.
pub fn sampled_pair_counts(
    f: &[f64],
    g: &[f64],
    tol: f64,
    seed: u64,
    block: u64,
    pairs: u64,
) -> PairCounts {
    assert_eq!(f.len(), g.len());
    let n = f.len();
    let mut c = PairCounts::default();
    if n < 2 {
        return c;
    }
    let mut rng = rng::stream(seed, Domain::Pairs, block);
    for _ in 0..pairs {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        c.record(f[i] - f[j], g[i] - g[j], tol);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_measures() {
        let r = degrees(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 1e-12).unwrap();
        assert_eq!(r.consistency, Some(1.0));
        assert_eq!((r.p_count, r.q_count), (0, 0));
        assert_eq!(r.discriminancy, None);
    }

    #[test]
    fn reversed_measures() {
        let r = degrees(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0], 1e-12).unwrap();
        assert_eq!(r.consistency, Some(0.0));
        assert_eq!(r.s_count, 3);
    }

    #[test]
    fn ties_and_discriminancy() {
        let f = [1.0, 2.0, 3.0, 1.0];
        let g = [0.0, 0.0, 1.0, 5.0];
        let r = degrees(&f, &g, 1e-12).unwrap();
        // (0,1) P; (0,2) R; (0,3) Q; (1,2) R; (1,3) f:2>1, g:0<5 -> S; (2,3) f:3>1, g:1<5 -> S
        assert_eq!(r.counts(), PairCounts { p: 1, q: 1, r: 2, s: 2 });
        assert_eq!(r.discriminancy, Some(1.0));
        assert_eq!(r.consistency, Some(0.5));
    }

    #[test]
    fn tolerance_merges_near_values() {
        let r = degrees(&[1.0, 1.0 + 1e-13], &[0.0, 1.0], 1e-12).unwrap();
        assert_eq!(r.q_count, 1);
        let r = degrees(&[1.0, 1.0 + 1e-13], &[0.0, 1.0], 0.0).unwrap();
        assert_eq!(r.r_count, 1);
    }

    #[test]
    fn input_errors() {
        assert_eq!(degrees(&[1.0], &[1.0, 2.0], 0.0), Err(ComparisonError::LengthMismatch(1, 2)));
        assert_eq!(degrees(&[], &[], 0.0), Err(ComparisonError::TooFewValues { got: 0, need: 1 }));
        assert_eq!(degrees(&[1.0], &[1.0], -1.0), Err(ComparisonError::NegativeTolerance));
    }

    #[test]
    fn row_ranges_partition() {
        let f: alloc::vec::Vec<f64> = (0..37).map(|i| ((i * 7919) % 13) as f64).collect();
        let g: alloc::vec::Vec<f64> = (0..37).map(|i| ((i * 104729) % 11) as f64).collect();
        let whole = pair_counts_for_rows(&f, &g, 0.0, 0..37);
        let split = pair_counts_for_rows(&f, &g, 0.0, 0..5)
            + pair_counts_for_rows(&f, &g, 0.0, 5..30)
            + pair_counts_for_rows(&f, &g, 0.0, 30..37);
        assert_eq!(whole, split);
        let total = whole.p + whole.q + whole.r + whole.s;
        assert!(total <= 37 * 36 / 2);
    }

    #[test]
    fn sampled_blocks_are_deterministic() {
        let f: alloc::vec::Vec<f64> = (0..100).map(|i| i as f64).collect();
        let g: alloc::vec::Vec<f64> = (0..100).map(|i| (i as f64).sqrt()).collect();
        let a = sampled_pair_counts(&f, &g, 0.0, 5, 2, 1000);
        assert_eq!(a, sampled_pair_counts(&f, &g, 0.0, 5, 2, 1000));
        assert_eq!(a.r, 1000);
        assert_ne!(a, PairCounts::default());
    }
}
