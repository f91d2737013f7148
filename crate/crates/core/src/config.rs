//! Structured text (TOML) configuration for models, policies, and runs.
//!
//! A config file can name a bundled preset for its prior and review model and
//! override or extend the rest:
//!
//! ```toml
//! preset = "ICLR2020-L4"
//! m = 3
//!
//! [author]
//! kind = "noiseless"
//! v = 5.0
//! eta = 0.7
//!
//! [policy]
//! kind = "threshold"
//! tau = -0.24
//! r = 0.0
//! ```

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::learn::presets;
use crate::model::{
    mix_with_uniform, AlphaSpec, AuthorModel, AuthorSignal, NoiseModel, Policy, QualityPrior,
    ReviewModel, Setting, TieBreak,
};

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// Bundled preset supplying `prior` and `review` unless given explicitly.
    pub preset: Option<String>,
    /// Reviews solicited per round (default 1).
    pub m: Option<usize>,
    pub prior: Option<PriorCfg>,
    pub review: Option<ReviewCfg>,
    pub author: Option<AuthorCfg>,
    pub policy: Option<PolicyCfg>,
    pub sim: Option<SimCfg>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorCfg {
    pub kind: String,
    pub values: Option<Vec<f64>>,
    pub probs: Option<Vec<f64>>,
    pub family: Option<String>,
    pub params: Option<std::collections::BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReviewCfg {
    pub kind: String,
    pub scores: Option<Vec<f64>>,
    pub confusion: Option<Vec<Vec<f64>>>,
    pub beta: Option<f64>,
    pub sigma: Option<f64>,
    /// Mix toward uniform: 1 keeps the matrix, 0 makes reviews uninformative.
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuthorCfg {
    pub kind: String,
    pub alpha: Option<AlphaCfg>,
    /// Mix toward uniform for the author matrix.
    pub lambda: Option<f64>,
    pub v: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AlphaCfg {
    Scalar(f64),
    Matrix(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyCfg {
    pub kind: String,
    pub tau: Option<f64>,
    pub r: Option<f64>,
    #[serde(rename = "T")]
    pub rounds: Option<usize>,
    pub taus: Option<Vec<f64>>,
    pub accept: Option<Vec<AcceptEntry>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcceptEntry {
    pub scores: Vec<f64>,
    pub p: f64,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SimCfg {
    pub n: Option<usize>,
    #[serde(rename = "T")]
    pub rounds: Option<usize>,
    pub seed: Option<u64>,
    pub strategy: Option<String>,
    pub tie_break: Option<String>,
}

/// Fully resolved configuration, ready to run.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub setting: Setting,
    pub policy: Option<Policy>,
    pub sim: SimParams,
    pub tie: TieBreak,
}

#[derive(Debug, Clone)]
pub struct SimParams {
    pub n: usize,
    pub rounds: usize,
    pub seed: u64,
    pub strategy: StrategyKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Myopic,
    OptimalDp,
}

impl ConfigFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    /// Resolve into domain types, pulling preset data when named.
    pub fn resolve(&self) -> Result<Resolved> {
        let preset = match &self.preset {
            Some(name) => Some(presets::preset(name)?),
            None => None,
        };
        let prior = match &self.prior {
            Some(cfg) => build_prior(cfg)?,
            None => preset
                .as_ref()
                .map(|p| p.prior.clone())
                .ok_or_else(|| Error::Config("prior: missing (no preset named)".into()))?,
        };
        let review_base = match &self.review {
            Some(cfg) if cfg.kind != "preset" => Some(build_review(cfg)?),
            _ => None,
        };
        let mut review = match review_base {
            Some(r) => r,
            None => preset
                .as_ref()
                .map(|p| p.review.clone())
                .ok_or_else(|| Error::Config("review: missing (no preset named)".into()))?,
        };
        if let Some(lambda) = self.review.as_ref().and_then(|r| r.lambda) {
            review = apply_review_lambda(&review, lambda)?;
        }

        let author = match &self.author {
            Some(cfg) => build_author(cfg)?,
            None => AuthorModel::noiseless(5.0, 0.7),
        };

        let setting = Setting { prior, review, author, m: self.m.unwrap_or(1) };
        setting.validate()?;

        let policy = match &self.policy {
            Some(cfg) => Some(build_policy(cfg)?),
            None => None,
        };

        let sim_cfg = self.sim.clone().unwrap_or_default();
        let strategy = match sim_cfg.strategy.as_deref() {
            None | Some("myopic") => StrategyKind::Myopic,
            Some("dp") => StrategyKind::OptimalDp,
            Some(other) => {
                return Err(Error::Config(format!(
                    "sim.strategy: '{other}' (expected 'myopic' or 'dp')"
                )))
            }
        };
        let tie = match sim_cfg.tie_break.as_deref() {
            None | Some("not_submit") => TieBreak::NotSubmit,
            Some("submit") => TieBreak::Submit,
            Some(other) => {
                return Err(Error::Config(format!(
                    "sim.tie_break: '{other}' (expected 'not_submit' or 'submit')"
                )))
            }
        };
        Ok(Resolved {
            setting,
            policy,
            sim: SimParams {
                n: sim_cfg.n.unwrap_or(10_000),
                rounds: sim_cfg.rounds.unwrap_or(10),
                seed: sim_cfg.seed.unwrap_or(0),
                strategy,
            },
            tie,
        })
    }
}

fn param(
    params: &Option<std::collections::BTreeMap<String, f64>>,
    key: &str,
    section: &str,
) -> Result<f64> {
    params
        .as_ref()
        .and_then(|m| m.get(key))
        .copied()
        .ok_or_else(|| Error::Config(format!("{section}.params.{key}: missing")))
}

fn build_prior(cfg: &PriorCfg) -> Result<QualityPrior> {
    let prior = match cfg.kind.as_str() {
        "categorical" => QualityPrior::Categorical {
            values: cfg
                .values
                .clone()
                .ok_or_else(|| Error::Config("prior.values: missing".into()))?,
            probs: cfg
                .probs
                .clone()
                .ok_or_else(|| Error::Config("prior.probs: missing".into()))?,
        },
        "continuous" => match cfg.family.as_deref() {
            Some("gaussian") => QualityPrior::Gaussian {
                mu: param(&cfg.params, "mu", "prior")?,
                sigma: param(&cfg.params, "sigma", "prior")?,
            },
            Some("laplace") => QualityPrior::Laplace {
                mu: param(&cfg.params, "mu", "prior")?,
                b: param(&cfg.params, "b", "prior")?,
            },
            Some("cauchy") => QualityPrior::Cauchy {
                x0: param(&cfg.params, "x0", "prior")?,
                gamma: param(&cfg.params, "gamma", "prior")?,
            },
            other => {
                return Err(Error::Config(format!(
                    "prior.family: {other:?} (expected gaussian, laplace, or cauchy)"
                )))
            }
        },
        other => {
            return Err(Error::Config(format!(
                "prior.kind: '{other}' (expected categorical or continuous)"
            )))
        }
    };
    prior.validate()?;
    Ok(prior)
}

fn build_review(cfg: &ReviewCfg) -> Result<ReviewModel> {
    let review = match cfg.kind.as_str() {
        "categorical" => ReviewModel::Categorical {
            scores: cfg
                .scores
                .clone()
                .ok_or_else(|| Error::Config("review.scores: missing".into()))?,
            confusion: cfg
                .confusion
                .clone()
                .ok_or_else(|| Error::Config("review.confusion: missing".into()))?,
        },
        "binary" => ReviewModel::Binary {
            beta: cfg.beta.ok_or_else(|| Error::Config("review.beta: missing".into()))?,
        },
        "gaussian" => ReviewModel::Additive {
            noise: NoiseModel::Gaussian {
                sigma: cfg.sigma.ok_or_else(|| Error::Config("review.sigma: missing".into()))?,
            },
        },
        other => {
            return Err(Error::Config(format!(
                "review.kind: '{other}' (expected categorical, binary, or gaussian)"
            )))
        }
    };
    Ok(review)
}

/// Mix a review model toward uninformative signals.
pub fn apply_review_lambda(review: &ReviewModel, lambda: f64) -> Result<ReviewModel> {
    match review {
        ReviewModel::Categorical { scores, confusion } => Ok(ReviewModel::Categorical {
            scores: scores.clone(),
            confusion: mix_with_uniform(confusion, lambda)?,
        }),
        ReviewModel::Binary { beta } => {
            if !(0.0..=1.0).contains(&lambda) {
                return Err(Error::Config(format!("lambda: {lambda} outside [0, 1]")));
            }
            Ok(ReviewModel::Binary { beta: lambda * beta + (1.0 - lambda) * 0.5 })
        }
        ReviewModel::Additive { .. } => Err(Error::Config(
            "review.lambda: mixing applies to categorical or binary reviews".into(),
        )),
    }
}

fn build_author(cfg: &AuthorCfg) -> Result<AuthorModel> {
    let signal = match cfg.kind.as_str() {
        "noiseless" => AuthorSignal::Noiseless,
        "noisy" => {
            let spec = match &cfg.alpha {
                None => AlphaSpec::SameAsReview,
                Some(AlphaCfg::Scalar(a)) => AlphaSpec::Binary(*a),
                Some(AlphaCfg::Matrix(m)) => AlphaSpec::Matrix(m.clone()),
            };
            AuthorSignal::Noisy(spec)
        }
        other => {
            return Err(Error::Config(format!(
                "author.kind: '{other}' (expected noiseless or noisy)"
            )))
        }
    };
    let mut author = AuthorModel { signal, value: cfg.v, discount: cfg.eta };
    if let Some(lambda) = cfg.lambda {
        author = apply_author_lambda(&author, lambda)?;
    }
    Ok(author)
}

/// Mix the author's signal toward uninformative.
pub fn apply_author_lambda(author: &AuthorModel, lambda: f64) -> Result<AuthorModel> {
    let signal = match &author.signal {
        AuthorSignal::Noiseless => {
            return Err(Error::Config(
                "author.lambda: mixing applies to noisy authors".into(),
            ))
        }
        AuthorSignal::Noisy(AlphaSpec::Binary(a)) => {
            AuthorSignal::Noisy(AlphaSpec::Binary(lambda * a + (1.0 - lambda) * 0.5))
        }
        AuthorSignal::Noisy(AlphaSpec::Matrix(m)) => {
            AuthorSignal::Noisy(AlphaSpec::Matrix(mix_with_uniform(m, lambda)?))
        }
        AuthorSignal::Noisy(AlphaSpec::SameAsReview) => {
            return Err(Error::Config(
                "author.lambda: resolve author.alpha before mixing (set alpha explicitly)".into(),
            ))
        }
    };
    Ok(AuthorModel { signal, ..author.clone() })
}

fn build_policy(cfg: &PolicyCfg) -> Result<Policy> {
    let tau = || cfg.tau.ok_or_else(|| Error::Config("policy.tau: missing".into()));
    let policy = match cfg.kind.as_str() {
        "threshold" => Policy::Threshold { tau: tau()?, r: cfg.r.unwrap_or(0.0) },
        "general" => {
            let accept = cfg
                .accept
                .as_ref()
                .ok_or_else(|| Error::Config("policy.accept: missing".into()))?
                .iter()
                .map(|e| {
                    let mut s = e.scores.clone();
                    s.sort_by(f64::total_cmp);
                    (s, e.p)
                })
                .collect();
            Policy::GeneralMemoryless { accept }
        }
        "time_limited" => Policy::TimeLimitedFixed {
            tau: tau()?,
            r: cfg.r.unwrap_or(0.0),
            rounds: cfg.rounds.ok_or_else(|| Error::Config("policy.T: missing".into()))?,
        },
        "round_dependent" => Policy::RoundDependent {
            taus: cfg.taus.clone().ok_or_else(|| Error::Config("policy.taus: missing".into()))?,
        },
        "review_following" => Policy::ReviewFollowing {
            taus: cfg.taus.clone().ok_or_else(|| Error::Config("policy.taus: missing".into()))?,
        },
        other => {
            return Err(Error::Config(format!(
                "policy.kind: '{other}' (expected threshold, general, time_limited, round_dependent, or review_following)"
            )))
        }
    };
    policy.validate()?;
    Ok(policy)
}
