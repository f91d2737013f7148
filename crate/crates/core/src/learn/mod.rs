//! Fitting the categorical model to review-score data.
//!
//! The pipeline ingests per-paper score lists, runs a perturbed EM over a
//! range of quality-tier counts with 5-fold cross-validation, assigns numeric
//! quality values through a reversed-sigmoid map of mean scores, and emits a
//! model in the same schema the rest of the crate loads. Fitted reference
//! parameters for the ICLR 2020/2021 datasets ship as presets.

pub mod em;
pub mod presets;
pub mod quality;

use std::collections::HashMap;
use std::io::BufRead;

use serde::Deserialize;

use crate::error::{Error, Result};

pub use em::{cross_validate, em_fit, CvResult, EmFit, EmOptions};
pub use presets::{preset, preset_names, preset_text, Preset};
pub use quality::{psi, quality_values};

/// Number of distinct review scores the learner expects (ratings 0..9).
pub const N_SCORES: usize = 10;

/// Per-paper review scores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReviewDataset {
    /// One entry per paper: the scores of its reviews, each in 0..9.
    pub papers: Vec<Vec<u8>>,
    pub source: String,
    /// Papers dropped at ingest for having no reviews.
    pub dropped: usize,
}

impl ReviewDataset {
    pub fn new(papers: Vec<Vec<u8>>, source: impl Into<String>) -> Result<Self> {
        if papers.is_empty() {
            return Err(Error::Config("dataset: empty".into()));
        }
        for (i, scores) in papers.iter().enumerate() {
            if scores.is_empty() {
                return Err(Error::Config(format!("dataset: paper {i} has no reviews")));
            }
            if scores.iter().any(|&s| s as usize >= N_SCORES) {
                return Err(Error::Config(format!("dataset: paper {i} has a score above 9")));
            }
        }
        Ok(ReviewDataset { papers, source: source.into(), dropped: 0 })
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }
}

#[derive(Debug, Deserialize)]
struct ReviewRecord {
    paper_id: String,
    rating: i64,
}

/// Ingest newline-delimited JSON records `{"paper_id": ..., "rating": 0..9}`,
/// grouping ratings by paper in first-appearance order.
pub fn ingest_reviews<R: BufRead>(reader: R, source: &str) -> Result<ReviewDataset> {
    let mut order: Vec<String> = Vec::new();
    let mut by_paper: HashMap<String, Vec<u8>> = HashMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let record: ReviewRecord = serde_json::from_str(trimmed).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        if !(0..N_SCORES as i64).contains(&record.rating) {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("rating {} outside 0..9", record.rating),
            });
        }
        if !by_paper.contains_key(&record.paper_id) {
            order.push(record.paper_id.clone());
        }
        by_paper.entry(record.paper_id).or_default().push(record.rating as u8);
    }
    if order.is_empty() {
        return Err(Error::Config("dataset: no records".into()));
    }
    let papers: Vec<Vec<u8>> = order
        .iter()
        .map(|id| by_paper.remove(id).expect("grouped"))
        .collect();
    ReviewDataset::new(papers, source)
}

/// A fitted categorical model.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnedModel {
    pub l: usize,
    pub p_hat: Vec<f64>,
    /// L x 10 row-stochastic score distributions, rows ordered by expected
    /// score.
    pub beta_hat: Vec<Vec<f64>>,
    /// Strictly increasing quality values per tier.
    pub q_values: Vec<f64>,
    /// Averaged held-out log-likelihood of the selected tier count.
    pub test_loglik: f64,
}

impl LearnedModel {
    /// Model file in the config schema the rest of the crate loads. Numbers
    /// are written with full round-trip precision so simplex validation holds
    /// on reload.
    pub fn to_config_toml(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(", ");
        let mut out = String::new();
        out.push_str("[prior]\nkind = \"categorical\"\nvalues = [");
        out.push_str(&join(&self.q_values));
        out.push_str("]\nprobs = [");
        out.push_str(&join(&self.p_hat));
        out.push_str("]\n\n[review]\nkind = \"categorical\"\nscores = [");
        out.push_str(
            &(0..N_SCORES).map(|s| format!("{s}.0")).collect::<Vec<_>>().join(", "),
        );
        out.push_str("]\nconfusion = [\n");
        for row in &self.beta_hat {
            out.push_str("  [");
            out.push_str(&join(row));
            out.push_str("],\n");
        }
        out.push_str("]\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ingest_groups_by_paper() {
        let data = r#"
            {"paper_id": "a", "rating": 5}
            {"paper_id": "b", "rating": 3}
            {"paper_id": "a", "rating": 6}
            {"paper_id": "c", "rating": 9}
            {"paper_id": "b", "rating": 3}
            {"paper_id": "a", "rating": 4}
            {"paper_id": "b", "rating": 2}
            {"paper_id": "c", "rating": 0}
            {"paper_id": "c", "rating": 1}
        "#;
        let ds = ingest_reviews(data.as_bytes(), "fixture").unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.papers[0], vec![5, 6, 4]);
        assert_eq!(ds.papers[1], vec![3, 3, 2]);
        assert_eq!(ds.papers[2], vec![9, 0, 1]);
    }

    #[test]
    fn ingest_rejects_empty_and_malformed() {
        assert!(ingest_reviews("".as_bytes(), "x").is_err());
        let err = ingest_reviews("{\"paper_id\": \"a\"}".as_bytes(), "x").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        let err = ingest_reviews("{\"paper_id\": \"a\", \"rating\": 12}".as_bytes(), "x");
        assert!(err.is_err());
    }
}
