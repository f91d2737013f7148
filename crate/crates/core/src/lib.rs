//! Model of the conference submission-review market: a prestigious venue with
//! a threshold acceptance policy, an always-accepting "sure bet" outlet, and
//! authors who weigh acceptance odds against time discounting.
//!
//! The crate has four parts:
//!
//! * [`model`] and [`outcomes`]: domain types plus the exact Bayesian
//!   machinery (posterior expected qualities, review-outcome enumeration,
//!   acceptance probabilities, signal-quality orderings).
//! * [`analytics`] and [`sweep`]: closed-form equilibrium quantities for
//!   authors who know their paper's quality: de facto thresholds,
//!   resubmission gaps, conference quality, review burden, acceptance rate,
//!   quality/burden sweeps, and review-count searches.
//! * [`abm`]: agent-based simulation of the submit-review-decide loop for
//!   authors with noisy self-assessments, including myopic and
//!   backward-induction strategies and policies with institutional memory.
//! * [`learn`]: an EM pipeline that fits the categorical model to review
//!   score data, with cross-validation over the number of quality tiers and
//!   bundled parameter presets.

pub mod abm;
pub mod analytics;
pub mod blackwell;
pub mod config;
pub mod csvio;
pub mod error;
pub mod learn;
pub mod mlr;
pub mod model;
pub mod numeric;
pub mod outcomes;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{
    binary_setting, mix_with_uniform, AlphaSpec, AuthorModel, AuthorSignal, NoiseModel, Policy,
    QualityPrior, ReviewModel, Setting, TieBreak,
};
pub use outcomes::{
    acceptance_probability, posterior_expected_quality, threshold_policy_realize, OutcomeTable,
    PolicyEval, RealizedThreshold,
};
