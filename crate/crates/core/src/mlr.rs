//! Monotone likelihood ratio check for categorical signal families.

use serde::Serialize;

/// Slack for comparing likelihood-ratio cross products.
const MLR_TOL: f64 = 1e-12;

/// Outcome of an informativeness check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MlrResult {
    /// Strict MLR holds across all quality and signal pairs.
    Informative,
    /// Some entry is (numerically) zero, so strict ratio comparisons are
    /// undefined. Reported separately from a ratio violation because learned
    /// matrices routinely carry near-zero mass.
    NotFullSupport { quality: usize, signal: usize },
    /// First violating pair, in row/column indices: quality pair (q, q') with
    /// q' > q and signal pair (s, s') with s' > s whose ratios are ordered the
    /// wrong way.
    Violation { qualities: (usize, usize), signals: (usize, usize) },
}

impl MlrResult {
    pub fn is_informative(&self) -> bool {
        matches!(self, MlrResult::Informative)
    }
}

/// Check the strict monotone likelihood ratio property of a row-stochastic
/// confusion matrix whose rows are ordered by increasing quality and columns
/// by increasing signal: for q' > q and s' > s,
/// `m[q'][s'] / m[q][s'] > m[q'][s] / m[q][s]`.
pub fn check_mlr(confusion: &[Vec<f64>]) -> MlrResult {
    for (qi, row) in confusion.iter().enumerate() {
        for (si, &v) in row.iter().enumerate() {
            if v <= 0.0 {
                return MlrResult::NotFullSupport { quality: qi, signal: si };
            }
        }
    }
    let l = confusion.len();
    let n = confusion.first().map_or(0, |r| r.len());
    for q in 0..l {
        for qp in q + 1..l {
            for s in 0..n {
                for sp in s + 1..n {
                    // ratio(s') > ratio(s), compared by cross products
                    let lhs = confusion[qp][sp] * confusion[q][s];
                    let rhs = confusion[qp][s] * confusion[q][sp];
                    if lhs <= rhs + MLR_TOL * rhs.abs().max(1.0) {
                        return MlrResult::Violation { qualities: (q, qp), signals: (s, sp) };
                    }
                }
            }
        }
    }
    MlrResult::Informative
}
