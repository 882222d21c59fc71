use crate::ComparisonError;

/// Sample Pearson correlation, computed in two passes around the means.
pub fn pearson_correlation(xs: &[f64], ys: &[f64]) -> Result<f64, ComparisonError> {
    if xs.len() != ys.len() {
        return Err(ComparisonError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(ComparisonError::TooFewValues { got: xs.len(), need: 2 });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(ComparisonError::ZeroVariance);
    }
    Ok((sxy / (libm::sqrt(sxx) * libm::sqrt(syy))).clamp(-1.0, 1.0))
}

/// Single-pass co-moment accumulator (Welford) for streamed pairs.
///
/// [`merge`](Self::merge) combines partial accumulators, so streams can be
/// split and re-joined.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PearsonAccumulator {
    n: u64,
    mean_x: f64,
    mean_y: f64,
    m2_x: f64,
    m2_y: f64,
    c_xy: f64,
}

impl PearsonAccumulator {
    /// Empty accumulator.
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one `(x, y)` observation.
    pub fn push(&mut self, x: f64, y: f64) {
        self.n += 1;
        let n = self.n as f64;
        let dx = x - self.mean_x;
        self.mean_x += dx / n;
        let dy = y - self.mean_y;
        self.mean_y += dy / n;
        self.m2_x += dx * (x - self.mean_x);
        self.m2_y += dy * (y - self.mean_y);
        self.c_xy += dx * (y - self.mean_y);
    }

    /// Combines two accumulators (Chan et al. pairwise update).
    pub fn merge(&self, o: &Self) -> Self {
        if self.n == 0 {
            return *o;
        }
        if o.n == 0 {
            return *self;
        }
        let n = self.n + o.n;
        let (na, nb, nf) = (self.n as f64, o.n as f64, n as f64);
        let dx = o.mean_x - self.mean_x;
        let dy = o.mean_y - self.mean_y;
        PearsonAccumulator {
            n,
            mean_x: self.mean_x + dx * nb / nf,
            mean_y: self.mean_y + dy * nb / nf,
            m2_x: self.m2_x + o.m2_x + dx * dx * na * nb / nf,
            m2_y: self.m2_y + o.m2_y + dy * dy * na * nb / nf,
            c_xy: self.c_xy + o.c_xy + dx * dy * na * nb / nf,
        }
    }

    /// Observations seen.
    pub fn count(&self) -> u64 {
        self.n
    }

    /// Correlation so far; `None` with fewer than two points or zero variance.
    pub fn correlation(&self) -> Option<f64> {
        if self.n < 2 || self.m2_x <= 0.0 || self.m2_y <= 0.0 {
            return None;
        }
        Some((self.c_xy / (libm::sqrt(self.m2_x) * libm::sqrt(self.m2_y))).clamp(-1.0, 1.0))
    }
}
