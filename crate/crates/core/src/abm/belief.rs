//! Author beliefs over paper quality and their Bayesian updates.

use crate::error::{Error, Result};
use crate::model::SIMPLEX_TOL;

/// Posterior over the quality tiers, kept normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct Belief(Vec<f64>);

impl Belief {
    /// Point mass for noiseless authors.
    pub fn point_mass(l: usize, idx: usize) -> Self {
        let mut v = vec![0.0; l];
        v[idx] = 1.0;
        Belief(v)
    }

    /// Posterior after observing the author's own signal: prior times the
    /// signal likelihood column.
    pub fn from_author_signal(prior: &[f64], alpha: &[Vec<f64>], signal: usize) -> Result<Self> {
        let raw: Vec<f64> = prior
            .iter()
            .zip(alpha)
            .map(|(p, row)| p * row[signal])
            .collect();
        Belief::normalized(raw)
    }

    pub fn normalized(raw: Vec<f64>) -> Result<Self> {
        let z: f64 = raw.iter().sum();
        if !(z > 0.0) || !z.is_finite() {
            return Err(Error::DegenerateEvidence(
                "belief update produced zero posterior mass".into(),
            ));
        }
        Ok(Belief(raw.into_iter().map(|x| x / z).collect()))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn expectation(&self, values: &[f64]) -> f64 {
        self.0.iter().zip(values).map(|(b, v)| b * v).sum()
    }

    /// Multiplicative likelihood update with the counts of newly observed
    /// review scores; a noiseless point mass passes through unchanged.
    pub fn update_with_reviews(&self, confusion: &[Vec<f64>], counts: &[u16]) -> Result<Self> {
        let raw: Vec<f64> = self
            .0
            .iter()
            .zip(confusion)
            .map(|(b, row)| {
                let mut x = *b;
                for (s, &c) in counts.iter().enumerate() {
                    for _ in 0..c {
                        x *= row[s];
                    }
                }
                x
            })
            .collect();
        Belief::normalized(raw)
    }

    pub fn is_normalized(&self) -> bool {
        (self.0.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOL * self.0.len() as f64
    }
}
