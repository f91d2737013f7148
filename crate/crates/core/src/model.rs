//! Domain types for the review market: the paper-quality prior, the reviewer
//! signal model, the author model, and acceptance policies.
//!
//! All types are immutable after construction and validated up front, so every
//! downstream operation is a pure function that can be called from concurrent
//! workers.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Cauchy, ContinuousCDF, Laplace, Normal};

use crate::error::{Error, Result};

/// Tolerance for simplex sums (probability vectors, confusion-matrix rows).
pub const SIMPLEX_TOL: f64 = 1e-12;
/// Posterior-mean values closer than this are treated as one outcome class.
pub const U_MERGE_TOL: f64 = 1e-10;

fn check_simplex(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Config(format!("{name}: empty probability vector")));
    }
    if v.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
        return Err(Error::Config(format!("{name}: negative or non-finite entry")));
    }
    let s: f64 = v.iter().sum();
    if (s - 1.0).abs() > SIMPLEX_TOL * v.len() as f64 {
        return Err(Error::Config(format!("{name}: entries sum to {s}, expected 1")));
    }
    Ok(())
}

fn check_row_stochastic(name: &str, m: &[Vec<f64>], cols: usize) -> Result<()> {
    for (i, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::DimensionMismatch(format!(
                "{name}: row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        check_simplex(&format!("{name} row {i}"), row)?;
    }
    Ok(())
}

fn check_strictly_increasing(name: &str, v: &[f64]) -> Result<()> {
    if v.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!("{name}: values must be strictly increasing")));
    }
    Ok(())
}

/// Prior distribution over paper qualities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum QualityPrior {
    /// Finite quality set `values` (strictly increasing) with probabilities `probs`.
    Categorical { values: Vec<f64>, probs: Vec<f64> },
    Gaussian { mu: f64, sigma: f64 },
    Laplace { mu: f64, b: f64 },
    Cauchy { x0: f64, gamma: f64 },
}

impl QualityPrior {
    pub fn validate(&self) -> Result<()> {
        match self {
            QualityPrior::Categorical { values, probs } => {
                if values.len() != probs.len() {
                    return Err(Error::DimensionMismatch(format!(
                        "prior: {} values vs {} probs",
                        values.len(),
                        probs.len()
                    )));
                }
                check_strictly_increasing("prior.values", values)?;
                check_simplex("prior.probs", probs)
            }
            QualityPrior::Gaussian { sigma: s, .. } => {
                if *s > 0.0 {
                    Ok(())
                } else {
                    Err(Error::Config("prior.sigma: must be positive".into()))
                }
            }
            QualityPrior::Laplace { b, .. } => {
                if *b > 0.0 {
                    Ok(())
                } else {
                    Err(Error::Config("prior.b: must be positive".into()))
                }
            }
            QualityPrior::Cauchy { gamma, .. } => {
                if *gamma > 0.0 {
                    Ok(())
                } else {
                    Err(Error::Config("prior.gamma: must be positive".into()))
                }
            }
        }
    }

    pub fn is_categorical(&self) -> bool {
        matches!(self, QualityPrior::Categorical { .. })
    }

    pub fn categorical(&self) -> Option<(&[f64], &[f64])> {
        match self {
            QualityPrior::Categorical { values, probs } => Some((values, probs)),
            _ => None,
        }
    }

    /// Mean of the prior. Undefined for Cauchy priors.
    pub fn mean(&self) -> Result<f64> {
        match self {
            QualityPrior::Categorical { values, probs } => {
                Ok(values.iter().zip(probs).map(|(q, p)| q * p).sum())
            }
            QualityPrior::Gaussian { mu, .. } | QualityPrior::Laplace { mu, .. } => Ok(*mu),
            QualityPrior::Cauchy { .. } => Err(Error::Divergence(
                "conference quality is undefined under a Cauchy prior (no mean)".into(),
            )),
        }
    }

    pub fn density(&self, q: f64) -> f64 {
        match self {
            QualityPrior::Categorical { .. } => 0.0,
            QualityPrior::Gaussian { mu, sigma } => {
                let z = (q - mu) / sigma;
                (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
            }
            QualityPrior::Laplace { mu, b } => (-(q - mu).abs() / b).exp() / (2.0 * b),
            QualityPrior::Cauchy { x0, gamma } => {
                gamma / (std::f64::consts::PI * ((q - x0).powi(2) + gamma * gamma))
            }
        }
    }

    pub fn cdf(&self, q: f64) -> f64 {
        match self {
            QualityPrior::Categorical { values, probs } => values
                .iter()
                .zip(probs)
                .filter(|(v, _)| **v <= q)
                .map(|(_, p)| p)
                .sum(),
            QualityPrior::Gaussian { mu, sigma } => {
                Normal::new(*mu, *sigma).expect("validated").cdf(q)
            }
            QualityPrior::Laplace { mu, b } => Laplace::new(*mu, *b).expect("validated").cdf(q),
            QualityPrior::Cauchy { x0, gamma } => {
                Cauchy::new(*x0, *gamma).expect("validated").cdf(q)
            }
        }
    }

    pub fn quantile(&self, p: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&p));
        match self {
            QualityPrior::Categorical { values, probs } => {
                let mut acc = 0.0;
                for (v, pr) in values.iter().zip(probs) {
                    acc += pr;
                    if acc >= p {
                        return *v;
                    }
                }
                *values.last().expect("non-empty")
            }
            QualityPrior::Gaussian { mu, sigma } => {
                Normal::new(*mu, *sigma).expect("validated").inverse_cdf(p)
            }
            QualityPrior::Laplace { mu, b } => {
                Laplace::new(*mu, *b).expect("validated").inverse_cdf(p)
            }
            QualityPrior::Cauchy { x0, gamma } => {
                Cauchy::new(*x0, *gamma).expect("validated").inverse_cdf(p)
            }
        }
    }

    /// Location and scale used to size sweep grids and root brackets.
    pub fn location_scale(&self) -> (f64, f64) {
        match self {
            QualityPrior::Categorical { values, .. } => {
                let lo = values[0];
                let hi = *values.last().expect("non-empty");
                (0.5 * (lo + hi), (hi - lo).max(1e-6) * 0.5)
            }
            QualityPrior::Gaussian { mu, sigma } => (*mu, *sigma),
            QualityPrior::Laplace { mu, b } => (*mu, *b * std::f64::consts::SQRT_2),
            QualityPrior::Cauchy { x0, gamma } => (*x0, *gamma),
        }
    }

    /// Bounds of the quality set: exact for categorical priors, a wide central
    /// range for continuous ones (used only to lay out default sweep grids).
    pub fn quality_range(&self) -> (f64, f64) {
        match self {
            QualityPrior::Categorical { values, .. } => {
                (values[0], *values.last().expect("non-empty"))
            }
            _ => {
                let (loc, scale) = self.location_scale();
                (loc - 6.0 * scale, loc + 6.0 * scale)
            }
        }
    }

    /// Support must straddle zero for policy-optimization targets to exist.
    pub fn straddles_zero(&self) -> bool {
        match self {
            QualityPrior::Categorical { values, probs } => {
                values.iter().zip(probs).any(|(v, p)| *v < 0.0 && *p > 0.0)
                    && values.iter().zip(probs).any(|(v, p)| *v > 0.0 && *p > 0.0)
            }
            _ => true,
        }
    }
}

/// Zero-mean additive review-noise family for the continuous model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NoiseModel {
    Gaussian { sigma: f64 },
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseModel::Gaussian { sigma } => {
                if *sigma > 0.0 {
                    Ok(())
                } else {
                    Err(Error::Config("review.sigma: must be positive".into()))
                }
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            NoiseModel::Gaussian { sigma } => Normal::new(0.0, *sigma).expect("validated").cdf(x),
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        match self {
            NoiseModel::Gaussian { sigma } => {
                let z = x / sigma;
                (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
            }
        }
    }

    pub fn quantile(&self, p: f64) -> f64 {
        match self {
            NoiseModel::Gaussian { sigma } => {
                Normal::new(0.0, *sigma).expect("validated").inverse_cdf(p)
            }
        }
    }

    pub fn scale(&self) -> f64 {
        match self {
            NoiseModel::Gaussian { sigma } => *sigma,
        }
    }
}

/// Conditional distribution of a single review score given the paper quality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ReviewModel {
    /// `confusion[i]` is the score distribution for the i-th quality; `scores`
    /// are the strictly increasing score values.
    Categorical { scores: Vec<f64>, confusion: Vec<Vec<f64>> },
    /// Two qualities, two signals; the reviewer sees the correct sign with
    /// probability `beta`.
    Binary { beta: f64 },
    /// Score = quality + zero-mean noise.
    Additive { noise: NoiseModel },
}

impl ReviewModel {
    pub fn validate(&self, n_qualities: Option<usize>) -> Result<()> {
        match self {
            ReviewModel::Categorical { scores, confusion } => {
                check_strictly_increasing("review.scores", scores)?;
                if let Some(l) = n_qualities {
                    if confusion.len() != l {
                        return Err(Error::DimensionMismatch(format!(
                            "review.confusion: {} rows for {} qualities",
                            confusion.len(),
                            l
                        )));
                    }
                }
                check_row_stochastic("review.confusion", confusion, scores.len())
            }
            ReviewModel::Binary { beta } => {
                if !(*beta > 0.5 && *beta <= 1.0) {
                    return Err(Error::Config(format!(
                        "review.beta: {beta} outside (1/2, 1]"
                    )));
                }
                if let Some(l) = n_qualities {
                    if l != 2 {
                        return Err(Error::Config(format!(
                            "review.beta: binary reviews need 2 qualities, prior has {l}"
                        )));
                    }
                }
                Ok(())
            }
            ReviewModel::Additive { noise } => noise.validate(),
        }
    }

    pub fn is_continuous(&self) -> bool {
        matches!(self, ReviewModel::Additive { .. })
    }

    /// Categorical view: score values plus the confusion matrix, expanding the
    /// binary flip model to its 2x2 matrix.
    pub fn categorical_view(&self) -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
        match self {
            ReviewModel::Categorical { scores, confusion } => {
                Some((scores.clone(), confusion.clone()))
            }
            ReviewModel::Binary { beta } => Some((
                vec![-1.0, 1.0],
                vec![vec![*beta, 1.0 - *beta], vec![1.0 - *beta, *beta]],
            )),
            ReviewModel::Additive { .. } => None,
        }
    }
}

/// Mix each row of a row-stochastic matrix with the uniform distribution:
/// `lambda * row + (1 - lambda) * uniform`.
pub fn mix_with_uniform(matrix: &[Vec<f64>], lambda: f64) -> Result<Vec<Vec<f64>>> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Config(format!("lambda: {lambda} outside [0, 1]")));
    }
    let cols = matrix.first().map_or(0, |r| r.len());
    check_row_stochastic("mix_with_uniform input", matrix, cols)?;
    let u = 1.0 / cols as f64;
    Ok(matrix
        .iter()
        .map(|row| row.iter().map(|x| lambda * x + (1.0 - lambda) * u).collect())
        .collect())
}

/// How the author perceives their own paper.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AuthorSignal {
    /// The author knows the true quality.
    Noiseless,
    /// The author receives a signal through a confusion matrix.
    Noisy(AlphaSpec),
}

/// Source of the author confusion matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AlphaSpec {
    /// Author signals live in the reviewer signal space with the same matrix.
    SameAsReview,
    /// Binary flip model: correct sign with probability alpha.
    Binary(f64),
    Matrix(Vec<Vec<f64>>),
}

/// Author parameters: private signal model, conference value V > 1, and the
/// per-round discount factor eta in (0, 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuthorModel {
    pub signal: AuthorSignal,
    pub value: f64,
    pub discount: f64,
}

impl AuthorModel {
    pub fn noiseless(value: f64, discount: f64) -> Self {
        AuthorModel { signal: AuthorSignal::Noiseless, value, discount }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.value > 1.0) {
            return Err(Error::Config(format!("author.v: {} must exceed 1", self.value)));
        }
        if !(self.discount > 0.0 && self.discount < 1.0) {
            return Err(Error::Config(format!(
                "author.eta: {} outside (0, 1)",
                self.discount
            )));
        }
        if let AuthorSignal::Noisy(AlphaSpec::Binary(a)) = &self.signal {
            if !(*a > 0.5 && *a <= 1.0) {
                return Err(Error::Config(format!("author.alpha: {a} outside (1/2, 1]")));
            }
        }
        if let AuthorSignal::Noisy(AlphaSpec::Matrix(m)) = &self.signal {
            let cols = m.first().map_or(0, |r| r.len());
            check_row_stochastic("author.alpha", m, cols)?;
        }
        Ok(())
    }

    /// Attractiveness factor rho = (V - eta) / (1 - eta); always > 1, and the
    /// author submits exactly when the per-round acceptance probability
    /// exceeds 1/rho.
    pub fn rho(&self) -> f64 {
        (self.value - self.discount) / (1.0 - self.discount)
    }

    pub fn is_noiseless(&self) -> bool {
        matches!(self.signal, AuthorSignal::Noiseless)
    }
}

/// Acceptance rule used by the conference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Policy {
    /// Accept when the posterior expected quality exceeds `tau`; accept with
    /// probability `r` on the knife edge. `tau` may be +-infinity.
    Threshold { tau: f64, r: f64 },
    /// Arbitrary memoryless map from a review multiset to an acceptance
    /// probability. Entries are (sorted score values, probability); review
    /// vectors are exchangeable, so the sorted multiset identifies the vector.
    GeneralMemoryless { accept: Vec<(Vec<f64>, f64)> },
    /// Same as `Threshold`, but papers may be submitted at most `rounds` times.
    TimeLimitedFixed { tau: f64, r: f64, rounds: usize },
    /// Round t applies threshold `taus[t-1]` to the current round's reviews.
    RoundDependent { taus: Vec<f64> },
    /// Round t applies threshold `taus[t-1]` to the posterior conditioned on
    /// all reviews received so far (past reviews follow the paper).
    ReviewFollowing { taus: Vec<f64> },
}

impl Policy {
    pub fn validate(&self) -> Result<()> {
        let check_r = |r: f64| {
            if (0.0..=1.0).contains(&r) {
                Ok(())
            } else {
                Err(Error::Config(format!("policy.r: {r} outside [0, 1]")))
            }
        };
        match self {
            Policy::Threshold { tau, r } => {
                if tau.is_nan() {
                    return Err(Error::Config("policy.tau: NaN".into()));
                }
                check_r(*r)
            }
            Policy::GeneralMemoryless { accept } => {
                for (scores, p) in accept {
                    if !(0.0..=1.0).contains(p) {
                        return Err(Error::Config(format!(
                            "policy.accept: probability {p} outside [0, 1]"
                        )));
                    }
                    if scores.windows(2).any(|w| w[0] > w[1]) {
                        return Err(Error::Config(
                            "policy.accept: score multisets must be sorted".into(),
                        ));
                    }
                }
                Ok(())
            }
            Policy::TimeLimitedFixed { tau, r, rounds } => {
                if tau.is_nan() {
                    return Err(Error::Config("policy.tau: NaN".into()));
                }
                check_r(*r)?;
                if *rounds >= 1 {
                    Ok(())
                } else {
                    Err(Error::Config("policy.T: must be at least 1".into()))
                }
            }
            Policy::RoundDependent { taus } | Policy::ReviewFollowing { taus } => {
                if taus.is_empty() {
                    return Err(Error::Config("policy.taus: empty".into()));
                }
                if taus.iter().any(|t| t.is_nan()) {
                    return Err(Error::Config("policy.taus: NaN entry".into()));
                }
                Ok(())
            }
        }
    }

    /// Number of rounds a paper may be submitted under this policy, if capped.
    pub fn round_limit(&self) -> Option<usize> {
        match self {
            Policy::Threshold { .. } | Policy::GeneralMemoryless { .. } => None,
            Policy::TimeLimitedFixed { rounds, .. } => Some(*rounds),
            Policy::RoundDependent { taus } | Policy::ReviewFollowing { taus } => Some(taus.len()),
        }
    }

    /// Policies whose per-round decision depends only on the current round.
    pub fn is_memoryless(&self) -> bool {
        matches!(self, Policy::Threshold { .. } | Policy::GeneralMemoryless { .. })
    }
}

/// Tie-breaking for authors exactly indifferent between submitting and the
/// sure bet. The default keeps indifferent papers out, which minimizes the
/// review burden at equal conference quality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum TieBreak {
    #[default]
    NotSubmit,
    Submit,
}

/// A complete environment: prior, review model, author model, and the number
/// of reviews solicited per round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Setting {
    pub prior: QualityPrior,
    pub review: ReviewModel,
    pub author: AuthorModel,
    pub m: usize,
}

impl Setting {
    pub fn validate(&self) -> Result<()> {
        self.prior.validate()?;
        let l = self.prior.categorical().map(|(v, _)| v.len());
        self.review.validate(l)?;
        self.author.validate()?;
        if self.m < 1 {
            return Err(Error::Config("m: must be at least 1".into()));
        }
        if self.review.is_continuous() {
            if self.prior.is_categorical() {
                return Err(Error::Config(
                    "review: additive-noise reviews require a continuous prior".into(),
                ));
            }
            if self.m != 1 {
                return Err(Error::Config(
                    "m: the continuous additive model supports a single review per round".into(),
                ));
            }
        } else if !self.prior.is_categorical() {
            return Err(Error::Config(
                "prior: categorical reviews require a categorical prior".into(),
            ));
        }
        if let AuthorSignal::Noisy(spec) = &self.author.signal {
            match spec {
                AlphaSpec::SameAsReview => {
                    if self.review.is_continuous() {
                        return Err(Error::Config(
                            "author.alpha: no reviewer matrix to share in the continuous model"
                                .into(),
                        ));
                    }
                }
                AlphaSpec::Binary(_) => {
                    if l != Some(2) {
                        return Err(Error::Config(
                            "author.alpha: scalar alpha needs a two-quality prior".into(),
                        ));
                    }
                }
                AlphaSpec::Matrix(m) => {
                    if let Some(l) = l {
                        if m.len() != l {
                            return Err(Error::DimensionMismatch(format!(
                                "author.alpha: {} rows for {} qualities",
                                m.len(),
                                l
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The author confusion matrix, resolved against the review model.
    /// `None` for noiseless authors.
    pub fn author_confusion(&self) -> Result<Option<Vec<Vec<f64>>>> {
        match &self.author.signal {
            AuthorSignal::Noiseless => Ok(None),
            AuthorSignal::Noisy(AlphaSpec::SameAsReview) => {
                let (_, confusion) = self.review.categorical_view().ok_or_else(|| {
                    Error::Config("author.alpha: reviewer matrix unavailable".into())
                })?;
                Ok(Some(confusion))
            }
            AuthorSignal::Noisy(AlphaSpec::Binary(a)) => Ok(Some(vec![
                vec![*a, 1.0 - *a],
                vec![1.0 - *a, *a],
            ])),
            AuthorSignal::Noisy(AlphaSpec::Matrix(m)) => Ok(Some(m.clone())),
        }
    }

    pub fn rho(&self) -> f64 {
        self.author.rho()
    }
}

/// The binary workhorse model: qualities {-1, +1} with a uniform prior,
/// author flip probability `alpha`, reviewer flip probability `beta`.
pub fn binary_setting(alpha: f64, beta: f64, m: usize, value: f64, discount: f64) -> Setting {
    let signal = if alpha >= 1.0 {
        AuthorSignal::Noiseless
    } else {
        AuthorSignal::Noisy(AlphaSpec::Binary(alpha))
    };
    Setting {
        prior: QualityPrior::Categorical { values: vec![-1.0, 1.0], probs: vec![0.5, 0.5] },
        review: ReviewModel::Binary { beta },
        author: AuthorModel { signal, value, discount },
        m,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_is_the_submission_odds_threshold() {
        let a = AuthorModel::noiseless(5.0, 0.7);
        assert!((a.rho() - 43.0 / 3.0).abs() < 1e-12);
        assert!(a.rho() > 1.0);
    }

    #[test]
    fn categorical_prior_must_be_increasing_simplex() {
        let p = QualityPrior::Categorical { values: vec![1.0, 0.0], probs: vec![0.5, 0.5] };
        assert!(p.validate().is_err());
        let p = QualityPrior::Categorical { values: vec![0.0, 1.0], probs: vec![0.6, 0.5] };
        assert!(p.validate().is_err());
        let p = QualityPrior::Categorical { values: vec![0.0, 1.0], probs: vec![0.5, 0.5] };
        assert!(p.validate().is_ok());
    }

    #[test]
    fn binary_review_needs_informative_beta() {
        assert!(ReviewModel::Binary { beta: 0.5 }.validate(Some(2)).is_err());
        assert!(ReviewModel::Binary { beta: 0.8 }.validate(Some(2)).is_ok());
        assert!(ReviewModel::Binary { beta: 0.8 }.validate(Some(3)).is_err());
    }

    #[test]
    fn mix_with_uniform_endpoints() {
        let m = vec![vec![0.2, 0.8], vec![0.7, 0.3]];
        let id = mix_with_uniform(&m, 1.0).unwrap();
        assert_eq!(id, m);
        let unif = mix_with_uniform(&m, 0.0).unwrap();
        for row in unif {
            for x in row {
                assert!((x - 0.5).abs() < 1e-15);
            }
        }
        assert!(mix_with_uniform(&m, 1.5).is_err());
    }

    #[test]
    fn mix_with_uniform_midpoint_rows_stay_stochastic() {
        let m = vec![vec![0.1, 0.2, 0.7]];
        let out = mix_with_uniform(&m, 0.5).unwrap();
        let s: f64 = out[0].iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        for (a, b) in out[0].iter().zip(&m[0]) {
            assert!((a - (0.5 * b + 0.5 / 3.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn cauchy_prior_has_no_mean() {
        let p = QualityPrior::Cauchy { x0: 0.0, gamma: 1.0 };
        assert!(matches!(p.mean(), Err(Error::Divergence(_))));
    }

    #[test]
    fn continuous_setting_requires_single_review() {
        let s = Setting {
            prior: QualityPrior::Gaussian { mu: 0.0, sigma: 1.0 },
            review: ReviewModel::Additive { noise: NoiseModel::Gaussian { sigma: 1.0 } },
            author: AuthorModel::noiseless(5.0, 0.7),
            m: 2,
        };
        assert!(s.validate().is_err());
    }
}
