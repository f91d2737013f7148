//! Blackwell dominance between categorical signal structures.
//!
//! Signal matrix `beta` dominates `beta_prime` when some row-stochastic
//! garbling `gamma` satisfies `beta * gamma = beta_prime`: the weaker signal
//! is a noisy post-processing of the stronger one. Existence is a linear
//! feasibility problem, solved here by minimizing the worst entrywise
//! residual subject to the garbling constraints.

use microlp::{ComparisonOp, OptimizationDirection, Problem};

use crate::error::{Error, Result};

/// Entrywise tolerance for `beta * gamma = beta_prime`.
pub const GARBLING_TOL: f64 = 1e-9;
/// Largest signal-space size accepted by the feasibility solver.
pub const MAX_SIGNALS: usize = 16;

/// Search for a garbling from the signal space of `beta` (columns: n) to the
/// signal space of `beta_prime` (columns: n'). Both matrices must have one row
/// per quality, over the same quality set. Returns the garbling as an
/// n x n' row-stochastic matrix if one exists within [`GARBLING_TOL`].
pub fn check_blackwell(
    beta: &[Vec<f64>],
    beta_prime: &[Vec<f64>],
) -> Result<Option<Vec<Vec<f64>>>> {
    let l = beta.len();
    if l == 0 || beta_prime.len() != l {
        return Err(Error::DimensionMismatch(format!(
            "garbling check: {l} vs {} quality rows",
            beta_prime.len()
        )));
    }
    let n = beta[0].len();
    let np = beta_prime[0].len();
    if beta.iter().any(|r| r.len() != n) || beta_prime.iter().any(|r| r.len() != np) {
        return Err(Error::DimensionMismatch("garbling check: ragged matrix".into()));
    }
    if n > MAX_SIGNALS || np > MAX_SIGNALS {
        return Err(Error::Config(format!(
            "garbling check: signal spaces capped at {MAX_SIGNALS}"
        )));
    }

    // Variables: gamma[s][s'] >= 0 plus one slack t bounding every residual.
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let gamma_vars: Vec<Vec<_>> = (0..n)
        .map(|_| (0..np).map(|_| problem.add_var(0.0, (0.0, 1.0))).collect())
        .collect();
    let t = problem.add_var(1.0, (0.0, f64::INFINITY));

    // Rows of gamma are distributions.
    for row in &gamma_vars {
        let expr: Vec<_> = row.iter().map(|&v| (v, 1.0)).collect();
        problem.add_constraint(expr, ComparisonOp::Eq, 1.0);
    }
    // |sum_s beta[q][s] gamma[s][s'] - beta_prime[q][s']| <= t
    for q in 0..l {
        for sp in 0..np {
            let base: Vec<_> = (0..n).map(|s| (gamma_vars[s][sp], beta[q][s])).collect();
            let mut le = base.clone();
            le.push((t, -1.0));
            problem.add_constraint(le, ComparisonOp::Le, beta_prime[q][sp]);
            let mut ge = base;
            ge.push((t, 1.0));
            problem.add_constraint(ge, ComparisonOp::Ge, beta_prime[q][sp]);
        }
    }

    let solution = match problem.solve() {
        Ok(s) => s,
        Err(microlp::Error::Infeasible) => return Ok(None),
        Err(e) => return Err(Error::Divergence(format!("garbling solver failed: {e}"))),
    };
    if solution.objective() > GARBLING_TOL {
        return Ok(None);
    }
    let gamma: Vec<Vec<f64>> = gamma_vars
        .iter()
        .map(|row| row.iter().map(|&v| solution[v].max(0.0)).collect())
        .collect();
    Ok(Some(gamma))
}
