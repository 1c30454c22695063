//! Wynn's epsilon algorithm for accelerating slowly converging partial sums.

/// Sliding-window epsilon table over a sequence of partial sums.
///
/// Each call to [`EpsilonTable::push`] rebuilds the table from the most
/// recent `window` entries and returns the highest even-order estimate
/// together with an error estimate built from the last four estimates.
#[derive(Debug, Clone)]
pub struct EpsilonTable {
    sums: Vec<f64>,
    window: usize,
    estimates: Vec<f64>,
}

impl EpsilonTable {
    pub fn new(window: usize) -> Self {
        Self {
            sums: Vec::new(),
            window: window.max(3),
            estimates: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    /// Appends a partial sum; returns `(estimate, error)` once at least four
    /// estimates exist. A four-estimate window catches sequences whose
    /// estimates stall in pairs while still drifting.
    pub fn push(&mut self, partial_sum: f64) -> Option<(f64, f64)> {
        self.sums.push(partial_sum);
        let start = self.sums.len().saturating_sub(self.window);
        let estimate = extrapolate(&self.sums[start..]);
        self.estimates.push(estimate);
        let n = self.estimates.len();
        if n < 4 {
            return None;
        }
        let e = &self.estimates[n - 4..];
        let error = e[..3].iter().map(|v| (e[3] - v).abs()).sum();
        Some((e[3], error))
    }
}

/// Highest even-column element of the epsilon table built from `sums`
/// that uses the most recent entry.
fn extrapolate(sums: &[f64]) -> f64 {
    let Some(&last) = sums.last() else {
        return f64::NAN;
    };
    let mut best = last;
    let mut prev = vec![0.0; sums.len() + 1];
    let mut cur = sums.to_vec();
    let mut order = 0usize;
    while cur.len() >= 2 {
        let scale = cur.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut next = Vec::with_capacity(cur.len() - 1);
        for j in 0..cur.len() - 1 {
            let d = cur[j + 1] - cur[j];
            if d.abs() <= 4.0 * f64::EPSILON * scale || !d.is_finite() {
                // Column converged to rounding level; deeper columns are noise.
                if order % 2 == 0 {
                    best = cur[cur.len() - 1];
                }
                return best;
            }
            next.push(prev[j + 1] + 1.0 / d);
        }
        prev = cur;
        cur = next;
        order += 1;
        if order % 2 == 0 {
            let candidate = cur[cur.len() - 1];
            if !candidate.is_finite() {
                return best;
            }
            best = candidate;
        }
    }
    best
}
