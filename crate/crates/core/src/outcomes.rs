//! Exact enumeration of review outcomes for categorical models.
//!
//! Reviews are i.i.d. given the paper quality, so a review vector is
//! exchangeable and only its multiset matters. Enumerating multisets with
//! multinomial weights shrinks |scores|^m outcomes to C(|scores|+m-1, m).
//! Outcomes are then merged into classes of equal posterior expected quality
//! and sorted, which is the representation every threshold computation uses.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{Policy, QualityPrior, ReviewModel, Setting, U_MERGE_TOL};
use crate::numeric;

/// Hard cap on the number of raw review vectors enumerated by the
/// full-vector (non-multiset) path.
pub const VECTOR_ENUM_LIMIT: usize = 10_000_000;

/// One review multiset: counts per score index, its multinomial weight, the
/// likelihood per quality (weight included), and the posterior expected
/// quality.
#[derive(Debug, Clone)]
pub struct MultisetOutcome {
    pub counts: Vec<u16>,
    pub weight: f64,
    pub lik: Vec<f64>,
    pub u: f64,
}

/// A maximal set of multisets sharing one posterior expected quality.
#[derive(Debug, Clone)]
pub struct OutcomeClass {
    pub u: f64,
    /// P(class | quality i), summed over member multisets.
    pub lik: Vec<f64>,
    pub members: Vec<usize>,
}

/// All realizable review outcomes of a categorical setting, sorted by
/// posterior expected quality.
#[derive(Debug, Clone)]
pub struct OutcomeTable {
    pub q_values: Vec<f64>,
    pub q_probs: Vec<f64>,
    pub scores: Vec<f64>,
    pub confusion: Vec<Vec<f64>>,
    pub m: usize,
    pub multisets: Vec<MultisetOutcome>,
    /// Ascending in `u`; zero-probability multisets are excluded.
    pub classes: Vec<OutcomeClass>,
    class_of_multiset: HashMap<Vec<u16>, usize>,
}

fn multinomial_weight(m: usize, counts: &[u16]) -> f64 {
    let mut w = 1.0;
    let mut seen = 0u32;
    for &c in counts {
        for i in 1..=c as u32 {
            seen += 1;
            w *= seen as f64 / i as f64;
        }
    }
    debug_assert_eq!(seen as usize, m);
    w
}

fn enumerate_counts(n_scores: usize, m: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut current = vec![0u16; n_scores];
    fn rec(current: &mut Vec<u16>, idx: usize, left: u16, out: &mut Vec<Vec<u16>>) {
        if idx + 1 == current.len() {
            current[idx] = left;
            out.push(current.clone());
            current[idx] = 0;
            return;
        }
        for take in 0..=left {
            current[idx] = take;
            rec(current, idx + 1, left - take, out);
        }
        current[idx] = 0;
    }
    rec(&mut current, 0, m as u16, &mut out);
    out
}

impl OutcomeTable {
    /// Build the outcome table for a categorical setting with `m` reviews.
    pub fn build(prior: &QualityPrior, review: &ReviewModel, m: usize) -> Result<Self> {
        let (q_values, q_probs) = prior
            .categorical()
            .map(|(v, p)| (v.to_vec(), p.to_vec()))
            .ok_or_else(|| Error::Config("outcome table requires a categorical prior".into()))?;
        let (scores, confusion) = review
            .categorical_view()
            .ok_or_else(|| Error::Config("outcome table requires categorical reviews".into()))?;
        if m < 1 {
            return Err(Error::Config("m: must be at least 1".into()));
        }

        let mut multisets = Vec::new();
        for counts in enumerate_counts(scores.len(), m) {
            let weight = multinomial_weight(m, &counts);
            let lik: Vec<f64> = confusion
                .iter()
                .map(|row| {
                    let mut p = weight;
                    for (s, &c) in counts.iter().enumerate() {
                        for _ in 0..c {
                            p *= row[s];
                        }
                    }
                    p
                })
                .collect();
            let marg: f64 = lik.iter().zip(&q_probs).map(|(l, p)| l * p).sum();
            let u = if marg > 0.0 {
                lik.iter()
                    .zip(&q_probs)
                    .zip(&q_values)
                    .map(|((l, p), q)| l * p * q)
                    .sum::<f64>()
                    / marg
            } else {
                f64::NAN
            };
            multisets.push(MultisetOutcome { counts, weight, lik, u });
        }

        // Merge into classes: sort realizable multisets by u, then group
        // within the merge tolerance.
        let mut order: Vec<usize> = (0..multisets.len())
            .filter(|&i| multisets[i].u.is_finite())
            .collect();
        order.sort_by(|&a, &b| multisets[a].u.total_cmp(&multisets[b].u));
        let mut classes: Vec<OutcomeClass> = Vec::new();
        for idx in order {
            let u = multisets[idx].u;
            let mergeable = classes
                .last()
                .map(|c| (u - c.u).abs() < U_MERGE_TOL)
                .unwrap_or(false);
            if mergeable {
                let c = classes.last_mut().expect("non-empty");
                for (a, b) in c.lik.iter_mut().zip(&multisets[idx].lik) {
                    *a += *b;
                }
                c.members.push(idx);
            } else {
                classes.push(OutcomeClass {
                    u,
                    lik: multisets[idx].lik.clone(),
                    members: vec![idx],
                });
            }
        }
        let mut class_of_multiset = HashMap::new();
        for (ci, class) in classes.iter().enumerate() {
            for &mi in &class.members {
                class_of_multiset.insert(multisets[mi].counts.clone(), ci);
            }
        }
        Ok(OutcomeTable {
            q_values,
            q_probs,
            scores,
            confusion,
            m,
            multisets,
            classes,
            class_of_multiset,
        })
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn max_quality(&self) -> f64 {
        *self.q_values.last().expect("non-empty")
    }

    pub fn min_quality(&self) -> f64 {
        self.q_values[0]
    }

    /// Class index of a sampled review multiset (counts per score index).
    pub fn class_of_counts(&self, counts: &[u16]) -> Option<usize> {
        self.class_of_multiset.get(counts).copied()
    }

    /// Map score values to a counts vector. Scores must match the score set.
    pub fn counts_of_scores(&self, scores: &[f64]) -> Result<Vec<u16>> {
        let mut counts = vec![0u16; self.scores.len()];
        for &s in scores {
            let idx = self
                .scores
                .iter()
                .position(|&v| (v - s).abs() <= 1e-9)
                .ok_or_else(|| Error::Config(format!("review score {s} not in the score set")))?;
            counts[idx] += 1;
        }
        Ok(counts)
    }

    /// Posterior expected quality of a raw review vector.
    pub fn posterior_u(&self, review_scores: &[f64]) -> Result<f64> {
        if review_scores.len() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "review vector has {} scores, expected {}",
                review_scores.len(),
                self.m
            )));
        }
        let counts = self.counts_of_scores(review_scores)?;
        let ms = self
            .multisets
            .iter()
            .find(|o| o.counts == counts)
            .expect("all multisets enumerated");
        if ms.u.is_finite() {
            Ok(ms.u)
        } else {
            Err(Error::DegenerateEvidence(
                "review vector has zero likelihood under every quality".into(),
            ))
        }
    }
}

/// Effective accept rule produced by interpreting a raw threshold as a policy:
/// classes strictly above `knife_class` are accepted, the knife class with
/// probability `r_eff`, everything below rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizedThreshold {
    /// Index into `OutcomeTable::classes`, or `None` when nothing is accepted
    /// even partially.
    pub knife_class: Option<usize>,
    pub r_eff: f64,
}

impl RealizedThreshold {
    pub fn accept_all() -> Self {
        RealizedThreshold { knife_class: Some(0), r_eff: 1.0 }
    }

    pub fn reject_all() -> Self {
        RealizedThreshold { knife_class: None, r_eff: 0.0 }
    }

    /// Per-class acceptance probabilities.
    pub fn class_accept(&self, n_classes: usize) -> Vec<f64> {
        let mut probs = vec![0.0; n_classes];
        if let Some(k) = self.knife_class {
            probs[k] = self.r_eff;
            for p in probs.iter_mut().skip(k + 1) {
                *p = 1.0;
            }
        }
        probs
    }

    /// Equivalent explicit threshold policy.
    pub fn to_policy(&self, table: &OutcomeTable) -> Policy {
        match self.knife_class {
            None => Policy::Threshold { tau: f64::INFINITY, r: 0.0 },
            Some(k) => Policy::Threshold { tau: table.classes[k].u, r: self.r_eff },
        }
    }
}

/// Interpret a raw threshold `tau` as an effective accept rule:
/// 1. below the lowest class: accept everything;
/// 2. at or above the maximum quality: reject everything;
/// 3. between the top class and the maximum quality: accept the top class
///    with probability (maxQ - tau) / (maxQ - U_top);
/// 4. otherwise, with U_i <= tau < U_{i+1}: accept classes above i fully and
///    class i with probability (U_{i+1} - tau) / (U_{i+1} - U_i).
pub fn threshold_policy_realize(tau: f64, table: &OutcomeTable) -> Result<RealizedThreshold> {
    if table.classes.is_empty() {
        return Err(Error::Config("outcome table has no realizable classes".into()));
    }
    let us: Vec<f64> = table.classes.iter().map(|c| c.u).collect();
    let max_q = table.max_quality();
    if tau < us[0] {
        return Ok(RealizedThreshold::accept_all());
    }
    if tau >= max_q {
        return Ok(RealizedThreshold::reject_all());
    }
    let top = us.len() - 1;
    if tau >= us[top] {
        let r = (max_q - tau) / (max_q - us[top]);
        return Ok(RealizedThreshold { knife_class: Some(top), r_eff: r });
    }
    let i = us.partition_point(|&u| u <= tau) - 1;
    let r = (us[i + 1] - tau) / (us[i + 1] - us[i]);
    Ok(RealizedThreshold { knife_class: Some(i), r_eff: r })
}

/// A policy bound to a concrete model: per-class (and, when needed,
/// per-multiset) acceptance probabilities plus the induced per-quality
/// acceptance probability.
#[derive(Debug, Clone)]
pub enum PolicyEval {
    Categorical {
        /// Acceptance probability per outcome class.
        class_accept: Vec<f64>,
        /// Acceptance probability per quality index.
        p_acc: Vec<f64>,
    },
    Continuous {
        noise: crate::model::NoiseModel,
        tau: f64,
    },
}

impl PolicyEval {
    /// Acceptance probability for a paper of quality index `qi` (categorical)
    pub fn p_acc_idx(&self, qi: usize) -> f64 {
        match self {
            PolicyEval::Categorical { p_acc, .. } => p_acc[qi],
            PolicyEval::Continuous { .. } => panic!("continuous eval has no quality index"),
        }
    }

    /// Acceptance probability for a paper of quality `q`.
    pub fn p_acc(&self, table: Option<&OutcomeTable>, q: f64) -> f64 {
        match self {
            PolicyEval::Categorical { p_acc, .. } => {
                let t = table.expect("categorical eval needs its table");
                let qi = t
                    .q_values
                    .iter()
                    .position(|&v| (v - q).abs() <= 1e-12)
                    .expect("quality must be in the prior support");
                p_acc[qi]
            }
            PolicyEval::Continuous { noise, tau } => 1.0 - noise.cdf(tau - q),
        }
    }

    pub fn p_acc_vec(&self) -> &[f64] {
        match self {
            PolicyEval::Categorical { p_acc, .. } => p_acc,
            PolicyEval::Continuous { .. } => panic!("continuous eval has no p_acc vector"),
        }
    }

    pub fn class_accept(&self) -> &[f64] {
        match self {
            PolicyEval::Categorical { class_accept, .. } => class_accept,
            PolicyEval::Continuous { .. } => panic!("continuous eval has no classes"),
        }
    }
}

fn p_acc_from_class_accept(table: &OutcomeTable, class_accept: &[f64]) -> Vec<f64> {
    (0..table.q_values.len())
        .map(|qi| {
            table
                .classes
                .iter()
                .zip(class_accept)
                .map(|(c, a)| c.lik[qi] * a)
                .sum()
        })
        .collect()
}

/// Bind a memoryless policy to a categorical outcome table.
pub fn evaluate_memoryless(table: &OutcomeTable, policy: &Policy) -> Result<PolicyEval> {
    policy.validate()?;
    let class_accept: Vec<f64> = match policy {
        Policy::Threshold { tau, r } | Policy::TimeLimitedFixed { tau, r, .. } => table
            .classes
            .iter()
            .map(|c| {
                if (c.u - tau).abs() < U_MERGE_TOL {
                    *r
                } else if c.u > *tau {
                    1.0
                } else {
                    0.0
                }
            })
            .collect(),
        Policy::GeneralMemoryless { accept } => {
            let mut by_counts: HashMap<Vec<u16>, f64> = HashMap::new();
            for (scores, p) in accept {
                if scores.len() != table.m {
                    return Err(Error::DimensionMismatch(format!(
                        "policy.accept: multiset of {} scores, expected {}",
                        scores.len(),
                        table.m
                    )));
                }
                by_counts.insert(table.counts_of_scores(scores)?, *p);
            }
            // Every realizable multiset must be covered.
            let mut class_accept = vec![0.0; table.classes.len()];
            for (ci, class) in table.classes.iter().enumerate() {
                let mut acc = 0.0;
                let mut lik_total = 0.0;
                for &mi in &class.members {
                    let ms = &table.multisets[mi];
                    let p = by_counts.get(&ms.counts).copied().ok_or_else(|| {
                        Error::Config(format!(
                            "policy.accept: no probability for review multiset {:?}",
                            ms.counts
                        ))
                    })?;
                    // Classes can merge multisets with distinct acceptance
                    // probabilities; average by class likelihood mass so the
                    // per-quality P_acc stays exact when it cannot matter and
                    // well-defined when it can.
                    let mass: f64 = ms.lik.iter().zip(&table.q_probs).map(|(l, w)| l * w).sum();
                    acc += p * mass;
                    lik_total += mass;
                }
                class_accept[ci] = if lik_total > 0.0 { acc / lik_total } else { 0.0 };
            }
            // For exactness across qualities, bypass the class view entirely.
            let p_acc: Vec<f64> = (0..table.q_values.len())
                .map(|qi| {
                    table
                        .multisets
                        .iter()
                        .filter(|ms| ms.u.is_finite())
                        .map(|ms| ms.lik[qi] * by_counts.get(&ms.counts).copied().unwrap_or(0.0))
                        .sum()
                })
                .collect();
            return Ok(PolicyEval::Categorical { class_accept, p_acc });
        }
        Policy::RoundDependent { .. } | Policy::ReviewFollowing { .. } => {
            return Err(Error::Config(
                "policy: round-dependent policies are not memoryless".into(),
            ))
        }
    };
    let p_acc = p_acc_from_class_accept(table, &class_accept);
    Ok(PolicyEval::Categorical { class_accept, p_acc })
}

/// Probability that a submitted paper of quality `q` is accepted in one round.
pub fn acceptance_probability(setting: &Setting, policy: &Policy, q: f64) -> Result<f64> {
    if setting.review.is_continuous() {
        let tau = match policy {
            Policy::Threshold { tau, .. } | Policy::TimeLimitedFixed { tau, .. } => *tau,
            _ => {
                return Err(Error::Config(
                    "policy: only threshold policies are supported in the continuous model".into(),
                ))
            }
        };
        let noise = match setting.review {
            crate::model::ReviewModel::Additive { noise } => noise,
            _ => unreachable!(),
        };
        return Ok(1.0 - noise.cdf(tau - q));
    }
    let table = OutcomeTable::build(&setting.prior, &setting.review, setting.m)?;
    let eval = evaluate_memoryless(&table, policy)?;
    Ok(eval.p_acc(Some(&table), q))
}

/// Posterior expected quality E[Q | reviews] for a review vector, treating
/// reviews as conditionally i.i.d. given the quality.
pub fn posterior_expected_quality(
    prior: &QualityPrior,
    review: &ReviewModel,
    review_scores: &[f64],
) -> Result<f64> {
    match review {
        ReviewModel::Categorical { .. } | ReviewModel::Binary { .. } => {
            let table = OutcomeTable::build(prior, review, review_scores.len())?;
            table.posterior_u(review_scores)
        }
        ReviewModel::Additive { noise } => match prior {
            QualityPrior::Gaussian { mu, sigma } => {
                // Conjugate update: precision-weighted average of the prior
                // mean and the review mean.
                let s2 = match noise {
                    crate::model::NoiseModel::Gaussian { sigma } => sigma * sigma,
                };
                let m = review_scores.len() as f64;
                let mean_s: f64 = review_scores.iter().sum::<f64>() / m;
                let prec = 1.0 / (sigma * sigma) + m / s2;
                Ok((mu / (sigma * sigma) + m * mean_s / s2) / prec)
            }
            _ => {
                let (loc, _) = prior.location_scale();
                let joint = |q: f64| {
                    let mut w = prior.density(q);
                    for &s in review_scores {
                        w *= noise.density(s - q);
                    }
                    w
                };
                let z = numeric::integrate_line(&joint, loc)?;
                if z <= 0.0 {
                    return Err(Error::DegenerateEvidence(
                        "zero marginal likelihood for the review vector".into(),
                    ));
                }
                let num = numeric::integrate_line(|q| q * joint(q), loc)?;
                Ok(num / z)
            }
        },
    }
}

/// Enumerate all |scores|^m raw review vectors; used as an independent check
/// on the multiset reduction.
pub fn enumerate_vectors(n_scores: usize, m: usize) -> Result<Vec<Vec<u16>>> {
    let total = (n_scores as f64).powi(m as i32);
    if total > VECTOR_ENUM_LIMIT as f64 {
        return Err(Error::Config(format!(
            "vector enumeration of {n_scores}^{m} outcomes exceeds the {VECTOR_ENUM_LIMIT} cap"
        )));
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut v = vec![0u16; m];
    loop {
        out.push(v.clone());
        let mut i = 0;
        loop {
            if i == m {
                return Ok(out);
            }
            v[i] += 1;
            if (v[i] as usize) < n_scores {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AuthorModel;

    /// Three qualities {-2, 1, 5} with uniform prior and three scores; the
    /// single-review rows are (2/3,1/6,1/6), (1/3,1/6,1/2), (1/6,1/6,2/3).
    pub fn example_three_quality() -> (QualityPrior, ReviewModel) {
        let prior = QualityPrior::Categorical {
            values: vec![-2.0, 1.0, 5.0],
            probs: vec![1.0 / 3.0; 3],
        };
        let review = ReviewModel::Categorical {
            scores: vec![0.0, 1.0, 2.0],
            confusion: vec![
                vec![2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
                vec![1.0 / 3.0, 1.0 / 6.0, 1.0 / 2.0],
                vec![1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
            ],
        };
        (prior, review)
    }

    #[test]
    fn pair_posteriors_match_hand_values() {
        let (prior, review) = example_three_quality();
        let u_mm = posterior_expected_quality(&prior, &review, &[1.0, 1.0]).unwrap();
        assert!((u_mm - 4.0 / 3.0).abs() < 1e-12);
        let u_hl = posterior_expected_quality(&prior, &review, &[2.0, 0.0]).unwrap();
        assert!((u_hl - 9.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn uninformative_reviews_return_prior_mean() {
        let prior = QualityPrior::Categorical { values: vec![-1.0, 1.0], probs: vec![0.5, 0.5] };
        let review = ReviewModel::Categorical {
            scores: vec![0.0, 1.0],
            confusion: vec![vec![0.4, 0.6], vec![0.4, 0.6]],
        };
        let u = posterior_expected_quality(&prior, &review, &[1.0]).unwrap();
        assert!(u.abs() < 1e-12);
    }

    #[test]
    fn pair_classes_are_ordered_and_complete() {
        let (prior, review) = example_three_quality();
        let table = OutcomeTable::build(&prior, &review, 2).unwrap();
        // six multisets of two scores from three -> six classes, all distinct u
        assert_eq!(table.multisets.len(), 6);
        assert_eq!(table.n_classes(), 6);
        for w in table.classes.windows(2) {
            assert!(w[0].u < w[1].u);
        }
        // class likelihoods per quality sum to 1
        for qi in 0..3 {
            let total: f64 = table.classes.iter().map(|c| c.lik[qi]).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_review_classes_are_posteriors() {
        let (prior, review) = example_three_quality();
        let table = OutcomeTable::build(&prior, &review, 1).unwrap();
        assert_eq!(table.n_classes(), 3);
        for class in &table.classes {
            let mi = class.members[0];
            let s_idx = table.multisets[mi]
                .counts
                .iter()
                .position(|&c| c == 1)
                .unwrap();
            let u = posterior_expected_quality(&prior, &review, &[table.scores[s_idx]]).unwrap();
            assert!((class.u - u).abs() < 1e-12);
        }
    }

    #[test]
    fn realize_convention_cases() {
        let (prior, review) = example_three_quality();
        let table = OutcomeTable::build(&prior, &review, 2).unwrap();
        let all = threshold_policy_realize(-10.0, &table).unwrap();
        assert_eq!(all, RealizedThreshold::accept_all());
        let none = threshold_policy_realize(5.0, &table).unwrap();
        assert_eq!(none, RealizedThreshold::reject_all());
        // interpolation endpoint: tau exactly at a class mean accepts it fully
        let u1 = table.classes[1].u;
        let at = threshold_policy_realize(u1, &table).unwrap();
        assert_eq!(at.knife_class, Some(1));
        assert!((at.r_eff - 1.0).abs() < 1e-12);
        // top segment interpolates toward max quality
        let u_top = table.classes[5].u;
        let max_q = table.max_quality();
        let tau = 0.5 * (u_top + max_q);
        let top = threshold_policy_realize(tau, &table).unwrap();
        assert_eq!(top.knife_class, Some(5));
        assert!((top.r_eff - (max_q - tau) / (max_q - u_top)).abs() < 1e-12);
    }

    #[test]
    fn general_policy_acceptance_probabilities() {
        // Accept (H,H), (M,H) fully; (M,M), (L,H) at 1/2; reject the rest.
        let (prior, review) = example_three_quality();
        let table = OutcomeTable::build(&prior, &review, 2).unwrap();
        let policy = Policy::GeneralMemoryless {
            accept: vec![
                (vec![0.0, 0.0], 0.0),
                (vec![0.0, 1.0], 0.0),
                (vec![0.0, 2.0], 0.5),
                (vec![1.0, 1.0], 0.5),
                (vec![1.0, 2.0], 1.0),
                (vec![2.0, 2.0], 1.0),
            ],
        };
        let eval = evaluate_memoryless(&table, &policy).unwrap();
        let p = eval.p_acc_vec();
        assert!((p[2] - 19.0 / 24.0).abs() < 1e-12);
        assert!((p[1] - 43.0 / 72.0).abs() < 1e-12);
        assert!((p[0] - 5.0 / 24.0).abs() < 1e-12);
    }

    #[test]
    fn accept_all_threshold_is_certain_acceptance() {
        let (prior, review) = example_three_quality();
        let setting = Setting {
            prior,
            review,
            author: AuthorModel::noiseless(5.0, 0.7),
            m: 2,
        };
        for q in [-2.0, 1.0, 5.0] {
            let p = acceptance_probability(
                &setting,
                &Policy::Threshold { tau: f64::NEG_INFINITY, r: 0.0 },
                q,
            )
            .unwrap();
            assert!((p - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn binary_majority_matches_binomial() {
        let setting = crate::model::binary_setting(1.0, 0.8, 3, 5.0, 0.7);
        // majority rule: accept when posterior mean is positive
        let p = acceptance_probability(&setting, &Policy::Threshold { tau: 0.0, r: 0.0 }, 1.0)
            .unwrap();
        let beta: f64 = 0.8;
        let oracle = beta.powi(3) + 3.0 * beta * beta * (1.0 - beta);
        assert!((p - oracle).abs() < 1e-12);
        assert!((p - 0.896).abs() < 1e-12);
    }

    #[test]
    fn vector_enumeration_guard() {
        assert!(enumerate_vectors(10, 3).unwrap().len() == 1000);
        assert!(enumerate_vectors(10, 9).is_err());
    }

    #[test]
    fn continuous_single_review_acceptance() {
        let setting = Setting {
            prior: QualityPrior::Gaussian { mu: 0.0, sigma: 1.0 },
            review: ReviewModel::Additive { noise: crate::model::NoiseModel::Gaussian { sigma: 1.0 } },
            author: AuthorModel::noiseless(5.0, 0.7),
            m: 1,
        };
        let p = acceptance_probability(&setting, &Policy::Threshold { tau: 0.5, r: 0.0 }, 0.5)
            .unwrap();
        assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gaussian_conjugate_posterior() {
        let prior = QualityPrior::Gaussian { mu: 1.0, sigma: 2.0 };
        let review = ReviewModel::Additive { noise: crate::model::NoiseModel::Gaussian { sigma: 1.0 } };
        let u = posterior_expected_quality(&prior, &review, &[2.0]).unwrap();
        // precision 1/4 at mean 1 combined with precision 1 at 2
        let expect = (1.0 * 0.25 + 2.0 * 1.0) / 1.25;
        assert!((u - expect).abs() < 1e-12);
    }
}
