//! Numeric quality values for fitted tiers.

use crate::error::{Error, Result};
use crate::learn::N_SCORES;

/// Reversed (shifted, scaled) sigmoid mapping a mean score in [0, 9] to a
/// quality value: log((x + 0.01) / (9.01 - x)). Strictly increasing, with
/// convex weight on both extremes of the score scale.
pub fn psi(x: f64) -> f64 {
    ((x + 0.01) / (9.01 - x)).ln()
}

/// Tier quality values: the responsibility-weighted average of psi(mean
/// score) over papers, per tier.
///
/// `l_ik` responsibilities are recomputed from the fitted model by Bayes'
/// rule, so the values are a pure function of (data, p_hat, beta_hat).
pub fn quality_values(
    papers: &[Vec<u8>],
    p_hat: &[f64],
    beta_hat: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let l = p_hat.len();
    if beta_hat.len() != l {
        return Err(Error::DimensionMismatch(format!(
            "quality values: {} prior entries vs {} confusion rows",
            l,
            beta_hat.len()
        )));
    }
    let mut num = vec![0.0; l];
    let mut den = vec![0.0; l];
    for scores in papers {
        let mean = scores.iter().map(|&s| s as f64).sum::<f64>() / scores.len() as f64;
        let v = psi(mean);
        let mut resp: Vec<f64> = p_hat
            .iter()
            .zip(beta_hat)
            .map(|(pk, row)| {
                let mut lik = *pk;
                for &s in scores {
                    lik *= row[(s as usize).min(N_SCORES - 1)];
                }
                lik
            })
            .collect();
        let z: f64 = resp.iter().sum();
        if z <= 0.0 {
            continue;
        }
        for r in &mut resp {
            *r /= z;
        }
        for k in 0..l {
            num[k] += resp[k] * v;
            den[k] += resp[k];
        }
    }
    num.iter()
        .zip(&den)
        .enumerate()
        .map(|(k, (n, d))| {
            if *d > 0.0 {
                Ok(n / d)
            } else {
                Err(Error::Divergence(format!(
                    "quality values: tier {k} has zero total responsibility"
                )))
            }
        })
        .collect()
}
