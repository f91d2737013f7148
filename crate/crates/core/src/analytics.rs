//! Closed-form equilibrium quantities for authors who know their papers'
//! qualities (noiseless authors).
//!
//! A noiseless author never learns from reviews, so she either resubmits
//! until acceptance or never submits: she submits exactly when the per-round
//! acceptance probability of her paper exceeds 1/rho. Everything downstream
//! (conference quality, review burden, acceptance rate) is then an exact sum
//! or integral over the prior.

use crate::error::{Error, Result};
use crate::model::{NoiseModel, Policy, QualityPrior, ReviewModel, Setting, TieBreak};
use crate::numeric;
use crate::outcomes::{evaluate_memoryless, threshold_policy_realize, OutcomeTable, PolicyEval};

/// Acceptance probabilities below this are treated as divergent when a
/// submitted paper depends on them.
pub const MIN_P_ACC: f64 = 1e-12;
/// Absolute slack when comparing an acceptance probability against 1/rho.
pub const INDIFFERENCE_TOL: f64 = 1e-12;

/// Which papers are submitted in equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub enum SubmissionSet {
    /// Per-quality submit decision, aligned with the prior's quality vector.
    Categorical { submitted: Vec<bool> },
    /// All qualities above `theta` are submitted (boundary has measure zero).
    Continuous { theta: f64 },
}

impl SubmissionSet {
    pub fn none(l: usize) -> Self {
        SubmissionSet::Categorical { submitted: vec![false; l] }
    }
}

/// De facto threshold of a policy: the quality boundary that separates papers
/// that are (eventually) submitted and accepted from papers that never enter.
#[derive(Debug, Clone, PartialEq)]
pub struct DeFacto {
    pub kind: DeFactoKind,
    /// Set when the policy itself accepts or rejects everything.
    pub trivial_policy: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DeFactoKind {
    /// Every quality is submitted; theta = -infinity.
    AllSubmitted,
    /// No quality is submitted; theta = +infinity.
    NoneSubmitted,
    /// Categorical boundary: the largest non-submitted and smallest submitted
    /// qualities, plus the quality indifferent at exactly 1/rho, if any.
    Boundary { below: f64, above: f64, indifferent: Option<f64> },
    /// Continuous models: the unique root of P_acc(theta) = 1/rho.
    Root { theta: f64 },
}

impl DeFacto {
    /// The smallest de facto threshold (the convention used for resubmission
    /// gaps): the largest non-submitted quality in categorical models.
    pub fn theta(&self) -> f64 {
        match &self.kind {
            DeFactoKind::AllSubmitted => f64::NEG_INFINITY,
            DeFactoKind::NoneSubmitted => f64::INFINITY,
            DeFactoKind::Boundary { below, .. } => *below,
            DeFactoKind::Root { theta } => *theta,
        }
    }

    /// True when `theta` qualifies as a de facto threshold, i.e. it lies in
    /// the boundary interval.
    pub fn admits(&self, theta: f64) -> bool {
        match &self.kind {
            DeFactoKind::AllSubmitted => theta == f64::NEG_INFINITY,
            DeFactoKind::NoneSubmitted => theta == f64::INFINITY,
            DeFactoKind::Boundary { below, above, .. } => (*below..=*above).contains(&theta),
            DeFactoKind::Root { theta: t } => (theta - t).abs() <= numeric::ROOT_TOL,
        }
    }
}

/// Submission decision per quality given per-quality acceptance probabilities.
pub fn submission_from_p_acc(
    p_acc: &[f64],
    inv_rho: f64,
    tie: TieBreak,
) -> (Vec<bool>, Option<usize>) {
    let mut indifferent = None;
    let submitted: Vec<bool> = p_acc
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            if (p - inv_rho).abs() <= INDIFFERENCE_TOL {
                if indifferent.is_none() {
                    indifferent = Some(i);
                }
                tie == TieBreak::Submit
            } else {
                p > inv_rho
            }
        })
        .collect();
    (submitted, indifferent)
}

/// De facto threshold of a memoryless policy for noiseless authors.
///
/// Categorical models return the boundary pair around the submission cut;
/// continuous models solve P_acc(theta) = 1/rho by bisection (the map is
/// strictly increasing in quality for non-trivial threshold policies).
pub fn de_facto_threshold(setting: &Setting, policy: &Policy, tie: TieBreak) -> Result<DeFacto> {
    setting.validate()?;
    let inv_rho = 1.0 / setting.rho();
    if setting.review.is_continuous() {
        let (tau, noise) = continuous_policy(setting, policy)?;
        if tau == f64::NEG_INFINITY {
            return Ok(DeFacto { kind: DeFactoKind::AllSubmitted, trivial_policy: true });
        }
        if tau == f64::INFINITY {
            return Ok(DeFacto { kind: DeFactoKind::NoneSubmitted, trivial_policy: true });
        }
        let p_acc = move |q: f64| 1.0 - noise.cdf(tau - q);
        let theta = numeric::bisect_increasing(
            |q| p_acc(q) - inv_rho,
            tau - 4.0 * noise.scale(),
            tau + 4.0 * noise.scale(),
        )?;
        return Ok(DeFacto { kind: DeFactoKind::Root { theta }, trivial_policy: false });
    }

    let table = OutcomeTable::build(&setting.prior, &setting.review, setting.m)?;
    let eval = evaluate_memoryless(&table, policy)?;
    Ok(de_facto_categorical(&table, &eval, inv_rho, tie))
}

pub(crate) fn de_facto_categorical(
    table: &OutcomeTable,
    eval: &PolicyEval,
    inv_rho: f64,
    tie: TieBreak,
) -> DeFacto {
    let p_acc = eval.p_acc_vec();
    let trivial = eval.class_accept().iter().all(|&a| a >= 1.0)
        || eval.class_accept().iter().all(|&a| a <= 0.0);
    let (submitted, indifferent) = submission_from_p_acc(p_acc, inv_rho, tie);
    let kind = if submitted.iter().all(|&s| s) {
        DeFactoKind::AllSubmitted
    } else if submitted.iter().all(|&s| !s) {
        DeFactoKind::NoneSubmitted
    } else {
        let below = table
            .q_values
            .iter()
            .zip(&submitted)
            .filter(|(_, s)| !**s)
            .map(|(q, _)| *q)
            .fold(f64::NEG_INFINITY, f64::max);
        let above = table
            .q_values
            .iter()
            .zip(&submitted)
            .filter(|(_, s)| **s)
            .map(|(q, _)| *q)
            .fold(f64::INFINITY, f64::min);
        DeFactoKind::Boundary {
            below,
            above,
            indifferent: indifferent.map(|i| table.q_values[i]),
        }
    };
    DeFacto { kind, trivial_policy: trivial }
}

fn continuous_policy(setting: &Setting, policy: &Policy) -> Result<(f64, NoiseModel)> {
    let noise = match setting.review {
        ReviewModel::Additive { noise } => noise,
        _ => return Err(Error::Config("policy: expected a continuous review model".into())),
    };
    match policy {
        Policy::Threshold { tau, .. } | Policy::TimeLimitedFixed { tau, .. } => Ok((*tau, noise)),
        _ => Err(Error::Config(
            "policy: only threshold policies are supported in the continuous model".into(),
        )),
    }
}

/// The acceptance threshold that maximizes conference quality in the
/// continuous single-review model: the noise quantile at (V-1)/(V-eta).
/// Independent of the quality prior.
pub fn optimal_threshold_continuous(
    author: &crate::model::AuthorModel,
    noise: &NoiseModel,
) -> Result<f64> {
    author.validate()?;
    noise.validate()?;
    let p = (author.value - 1.0) / (author.value - author.discount);
    Ok(noise.quantile(p))
}

/// Resubmission gap tau - theta of a non-trivial threshold policy.
pub fn resubmission_gap(setting: &Setting, policy: &Policy, tie: TieBreak) -> Result<f64> {
    let tau = match policy {
        Policy::Threshold { tau, .. } | Policy::TimeLimitedFixed { tau, .. } => *tau,
        _ => {
            return Err(Error::Config(
                "policy: the resubmission gap needs a threshold policy".into(),
            ))
        }
    };
    let df = de_facto_threshold(setting, policy, tie)?;
    let theta = df.theta();
    if !theta.is_finite() {
        return Err(Error::Config(
            "policy: resubmission gap undefined for trivial submission behavior".into(),
        ));
    }
    Ok(tau - theta)
}

/// Expected sum of accepted papers' qualities per new paper, in steady state.
pub fn conference_quality(prior: &QualityPrior, submission: &SubmissionSet) -> Result<f64> {
    match (prior, submission) {
        (QualityPrior::Categorical { values, probs }, SubmissionSet::Categorical { submitted }) => {
            Ok(values
                .iter()
                .zip(probs)
                .zip(submitted)
                .filter(|(_, s)| **s)
                .map(|((q, p), _)| q * p)
                .sum())
        }
        (QualityPrior::Cauchy { .. }, _) => Err(Error::Divergence(
            "conference quality is undefined under a Cauchy prior (no mean)".into(),
        )),
        (_, SubmissionSet::Continuous { theta }) => {
            if *theta == f64::INFINITY {
                return Ok(0.0);
            }
            if *theta == f64::NEG_INFINITY {
                return prior.mean();
            }
            numeric::integrate_upper_tail(|q| q * prior.density(q), *theta)
        }
        _ => Err(Error::Config("conference quality: mismatched prior and submission set".into())),
    }
}

fn for_each_submitted<'a>(
    values: &'a [f64],
    probs: &'a [f64],
    submitted: &'a [bool],
) -> impl Iterator<Item = (usize, f64, f64)> + 'a {
    values
        .iter()
        .zip(probs)
        .zip(submitted)
        .enumerate()
        .filter(|(_, (_, s))| **s)
        .map(|(i, ((q, p), _))| (i, *q, *p))
}

/// Expected number of reviews per paper across all resubmission rounds:
/// each submitted quality contributes its mass times m / P_acc (geometric
/// resubmission), papers never submitted contribute zero.
pub fn review_burden(
    prior: &QualityPrior,
    submission: &SubmissionSet,
    eval: &PolicyEval,
    m: usize,
) -> Result<f64> {
    match (prior, submission) {
        (QualityPrior::Categorical { values, probs }, SubmissionSet::Categorical { submitted }) => {
            let mut total = 0.0;
            for (i, _, p) in for_each_submitted(values, probs, submitted) {
                let pa = eval.p_acc_idx(i);
                if pa < MIN_P_ACC {
                    return Err(Error::Divergence(format!(
                        "review burden diverges: quality {} submitted with acceptance probability {pa}",
                        values[i]
                    )));
                }
                total += p / pa;
            }
            Ok(m as f64 * total)
        }
        (_, SubmissionSet::Continuous { theta }) => {
            let integral = continuous_burden_integral(prior, eval, *theta)?;
            Ok(m as f64 * integral)
        }
        _ => Err(Error::Config("review burden: mismatched prior and submission set".into())),
    }
}

fn continuous_burden_integral(
    prior: &QualityPrior,
    eval: &PolicyEval,
    theta: f64,
) -> Result<f64> {
    if theta == f64::INFINITY {
        return Ok(0.0);
    }
    let p_acc = |q: f64| eval.p_acc(None, q);
    if theta == f64::NEG_INFINITY {
        // Only an accept-everything policy submits every paper.
        return Ok(1.0);
    }
    match prior {
        QualityPrior::Cauchy { x0, gamma } => numeric::integrate_cauchy_tail(
            |q| 1.0 / p_acc(q).max(MIN_P_ACC),
            *x0,
            *gamma,
            theta,
        ),
        _ => numeric::integrate_upper_tail(|q| prior.density(q) / p_acc(q).max(MIN_P_ACC), theta),
    }
}

/// Steady-state acceptance rate: accepted mass over submitted mass per round.
pub fn acceptance_rate(
    prior: &QualityPrior,
    submission: &SubmissionSet,
    eval: &PolicyEval,
) -> Result<f64> {
    match (prior, submission) {
        (QualityPrior::Categorical { values, probs }, SubmissionSet::Categorical { submitted }) => {
            let mut mass = 0.0;
            let mut denom = 0.0;
            for (i, _, p) in for_each_submitted(values, probs, submitted) {
                let pa = eval.p_acc_idx(i);
                if pa < MIN_P_ACC {
                    return Err(Error::Divergence(format!(
                        "acceptance rate diverges: quality {} submitted with acceptance probability {pa}",
                        values[i]
                    )));
                }
                mass += p;
                denom += p / pa;
            }
            Ok(if denom > 0.0 { mass / denom } else { 0.0 })
        }
        (_, SubmissionSet::Continuous { theta }) => {
            if *theta == f64::INFINITY {
                return Ok(0.0);
            }
            let mass = if *theta == f64::NEG_INFINITY {
                1.0
            } else {
                1.0 - prior.cdf(*theta)
            };
            let denom = continuous_burden_integral(prior, eval, *theta)?;
            Ok(if denom > 0.0 { mass / denom } else { 0.0 })
        }
        _ => Err(Error::Config("acceptance rate: mismatched prior and submission set".into())),
    }
}

/// Quality and burden when a paper may be submitted at most `rounds` times.
/// The submission set is unchanged by the cap; only the (1-(1-P)^T) factor
/// discounts papers that run out of attempts.
pub fn time_limited_metrics(
    prior: &QualityPrior,
    submission: &SubmissionSet,
    eval: &PolicyEval,
    m: usize,
    rounds: usize,
) -> Result<(f64, f64)> {
    let t = rounds as f64;
    let finish = |p: f64| -> f64 { 1.0 - (1.0 - p).powf(t) };
    match (prior, submission) {
        (QualityPrior::Categorical { values, probs }, SubmissionSet::Categorical { submitted }) => {
            let mut quality = 0.0;
            let mut burden = 0.0;
            for (i, q, p) in for_each_submitted(values, probs, submitted) {
                let pa = eval.p_acc_idx(i);
                if pa < MIN_P_ACC {
                    // With a round cap the burden stays finite: at most T rounds.
                    burden += p * t;
                    continue;
                }
                quality += p * q * finish(pa);
                burden += p * finish(pa) / pa;
            }
            Ok((quality, m as f64 * burden))
        }
        (QualityPrior::Cauchy { .. }, _) => Err(Error::Divergence(
            "conference quality is undefined under a Cauchy prior (no mean)".into(),
        )),
        (_, SubmissionSet::Continuous { theta }) => {
            if *theta == f64::INFINITY {
                return Ok((0.0, 0.0));
            }
            let p_acc = |q: f64| eval.p_acc(None, q);
            let quality =
                numeric::integrate_upper_tail(|q| q * prior.density(q) * finish(p_acc(q)), *theta)?;
            let burden = numeric::integrate_upper_tail(
                |q| prior.density(q) * finish(p_acc(q)) / p_acc(q).max(MIN_P_ACC),
                *theta,
            )?;
            Ok((quality, m as f64 * burden))
        }
        _ => Err(Error::Config("time-limited metrics: mismatched prior and submission set".into())),
    }
}

/// The smallest (most lenient) raw threshold at which the acceptance
/// probability of quality index `qi` is exactly `target`. Walks the piecewise
/// linear map tau -> P_acc(tau; q) segment by segment.
pub fn most_lenient_tau_for_target(
    table: &OutcomeTable,
    qi: usize,
    target: f64,
) -> Result<f64> {
    if !(0.0 < target && target < 1.0) {
        return Err(Error::Config(format!("target acceptance {target} outside (0, 1)")));
    }
    let classes = &table.classes;
    if classes.is_empty() {
        return Err(Error::Config("outcome table has no realizable classes".into()));
    }
    // tail[i] = acceptance probability when classes above i are fully
    // accepted and class i is rejected.
    let k = classes.len();
    let mut tail = vec![0.0; k + 1];
    for i in (0..k).rev() {
        tail[i] = tail[i + 1] + classes[i].lik[qi];
    }
    for i in 0..k {
        let hi = tail[i]; // r_eff = 1 at tau = U_i
        let lo = tail[i + 1]; // r_eff = 0 approaching the segment's end
        if target > hi + 1e-15 {
            continue;
        }
        if target >= lo {
            let lik = classes[i].lik[qi];
            let seg_end = if i + 1 < k { classes[i + 1].u } else { table.max_quality() };
            if lik <= 0.0 {
                // Flat segment at the target: the most lenient point is its start.
                return Ok(classes[i].u);
            }
            let r = (target - lo) / lik;
            return Ok(seg_end - r * (seg_end - classes[i].u));
        }
    }
    Err(Error::Divergence(format!(
        "no threshold attains acceptance probability {target} for quality index {qi}"
    )))
}

/// Result of a review-count search.
#[derive(Debug, Clone)]
pub struct MSearchPoint {
    pub m: usize,
    /// Most lenient threshold that keeps every negative quality out.
    pub tau: f64,
    pub burden: f64,
    /// Expected rounds until acceptance for a submitted paper.
    pub expected_rounds: f64,
}

#[derive(Debug, Clone)]
pub struct MSearch {
    pub points: Vec<MSearchPoint>,
    /// m values that cannot realize the quality-maximizing threshold.
    pub excluded: Vec<(usize, String)>,
    pub best: Option<MSearchPoint>,
}

/// For each review count m, find the most lenient threshold with de facto
/// threshold 0 (submit all positive qualities, no negative ones) and its
/// burden; return the m minimizing the burden.
pub fn optimal_m_search(
    prior: &QualityPrior,
    review: &ReviewModel,
    author: &crate::model::AuthorModel,
    m_range: std::ops::RangeInclusive<usize>,
) -> Result<MSearch> {
    let (values, probs) = prior
        .categorical()
        .ok_or_else(|| Error::Config("review-count search requires a categorical prior".into()))?;
    if !prior.straddles_zero() {
        return Err(Error::Config(
            "prior: support must contain negative and positive qualities".into(),
        ));
    }
    let inv_rho = 1.0 / author.rho();
    let bad_idx = values
        .iter()
        .enumerate()
        .filter(|(_, q)| **q < 0.0)
        .map(|(i, _)| i)
        .next_back()
        .expect("straddles zero");

    let mut points = Vec::new();
    let mut excluded = Vec::new();
    for m in m_range {
        let table = OutcomeTable::build(prior, review, m)?;
        let tau = match most_lenient_tau_for_target(&table, bad_idx, inv_rho) {
            Ok(t) => t,
            Err(e) => {
                excluded.push((m, e.to_string()));
                continue;
            }
        };
        let realized = threshold_policy_realize(tau, &table)?;
        let eval = PolicyEval::Categorical {
            p_acc: {
                let ca = realized.class_accept(table.n_classes());
                (0..values.len())
                    .map(|qi| table.classes.iter().zip(&ca).map(|(c, a)| c.lik[qi] * a).sum())
                    .collect()
            },
            class_accept: realized.class_accept(table.n_classes()),
        };
        let p_acc = eval.p_acc_vec();
        // The threshold must keep every negative quality out and let every
        // positive quality in.
        let ok_neg = values
            .iter()
            .zip(p_acc)
            .filter(|(q, _)| **q < 0.0)
            .all(|(_, p)| *p <= inv_rho + 1e-9);
        let ok_pos = values
            .iter()
            .zip(p_acc)
            .filter(|(q, _)| **q > 0.0)
            .all(|(_, p)| *p > inv_rho + INDIFFERENCE_TOL);
        if !(ok_neg && ok_pos) {
            excluded.push((m, format!("threshold {tau} cannot separate qualities at m = {m}")));
            continue;
        }
        let submitted: Vec<bool> = values.iter().zip(p_acc).map(|(q, p)| *q > 0.0 && *p > inv_rho).collect();
        let submission = SubmissionSet::Categorical { submitted };
        let burden = review_burden(prior, &submission, &eval, m)?;
        let mass: f64 = values.iter().zip(probs).filter(|(q, _)| **q > 0.0).map(|(_, p)| p).sum();
        let rounds = if mass > 0.0 { burden / (m as f64 * mass) } else { 0.0 };
        points.push(MSearchPoint { m, tau, burden, expected_rounds: rounds });
    }
    let best = points
        .iter()
        .min_by(|a, b| a.burden.total_cmp(&b.burden).then(a.m.cmp(&b.m)))
        .cloned();
    Ok(MSearch { points, excluded, best })
}

/// Minimal m whose quality-maximizing threshold accepts submitted papers
/// within `max_rounds` expected rounds; `None` when no m in range qualifies.
pub fn constrained_m_search(
    prior: &QualityPrior,
    review: &ReviewModel,
    author: &crate::model::AuthorModel,
    m_range: std::ops::RangeInclusive<usize>,
    max_rounds: f64,
) -> Result<(MSearch, Option<MSearchPoint>)> {
    if max_rounds < 1.0 {
        return Err(Error::Config(format!(
            "max expected rounds {max_rounds} below 1 is unattainable"
        )));
    }
    let search = optimal_m_search(prior, review, author, m_range)?;
    let feasible = search
        .points
        .iter()
        .filter(|p| p.expected_rounds <= max_rounds)
        .min_by_key(|p| p.m)
        .cloned();
    Ok((search, feasible))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{binary_setting, AuthorModel};

    fn gaussian_setting(sigma: f64, v: f64, eta: f64) -> Setting {
        Setting {
            prior: QualityPrior::Gaussian { mu: 0.0, sigma: 1.0 },
            review: ReviewModel::Additive { noise: NoiseModel::Gaussian { sigma } },
            author: AuthorModel::noiseless(v, eta),
            m: 1,
        }
    }

    #[test]
    fn continuous_de_facto_is_the_quantile_shift() {
        // V=5, eta=0.7: the author submits when 1 - Phi(tau - q) > 3/43,
        // so theta = tau - Phi^{-1}(40/43).
        let s = gaussian_setting(1.0, 5.0, 0.7);
        let policy = Policy::Threshold { tau: 0.0, r: 0.0 };
        let df = de_facto_threshold(&s, &policy, TieBreak::NotSubmit).unwrap();
        let theta = df.theta();
        let z = statrs::distribution::ContinuousCDF::inverse_cdf(
            &statrs::distribution::Normal::new(0.0, 1.0).unwrap(),
            40.0 / 43.0,
        );
        assert!((theta + z).abs() < 1e-6, "theta {theta} vs -z {}", -z);
    }

    #[test]
    fn accept_all_policy_submits_everything() {
        let s = gaussian_setting(1.0, 5.0, 0.7);
        let policy = Policy::Threshold { tau: f64::NEG_INFINITY, r: 0.0 };
        let df = de_facto_threshold(&s, &policy, TieBreak::NotSubmit).unwrap();
        assert_eq!(df.kind, DeFactoKind::AllSubmitted);
        assert!(df.trivial_policy);
        assert_eq!(df.theta(), f64::NEG_INFINITY);
    }

    #[test]
    fn optimal_threshold_limits() {
        // V=2, eta -> 0: quantile 1/2 of a symmetric law is 0.
        let noise = NoiseModel::Gaussian { sigma: 1.0 };
        let tau = optimal_threshold_continuous(&AuthorModel::noiseless(2.0, 1e-12), &noise).unwrap();
        assert!(tau.abs() < 1e-6);
        let tau = optimal_threshold_continuous(&AuthorModel::noiseless(5.0, 0.7), &noise).unwrap();
        assert!((tau - 1.47752529).abs() < 1e-6);
        // V -> 1+: the quantile argument goes to 0 and tau to the lower tail.
        let tau =
            optimal_threshold_continuous(&AuthorModel::noiseless(1.0 + 1e-9, 0.5), &noise).unwrap();
        assert!(tau < -5.0);
    }

    #[test]
    fn gap_constant_across_thresholds() {
        let s = gaussian_setting(1.0, 5.0, 0.7);
        let gaps: Vec<f64> = [-2.0, -0.5, 0.0, 1.0, 2.5]
            .iter()
            .map(|&tau| {
                resubmission_gap(&s, &Policy::Threshold { tau, r: 0.0 }, TieBreak::NotSubmit)
                    .unwrap()
            })
            .collect();
        let spread = gaps.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - gaps.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread < 1e-6, "gaps {gaps:?}");
    }

    #[test]
    fn half_normal_quality() {
        let prior = QualityPrior::Gaussian { mu: 0.0, sigma: 1.0 };
        let q = conference_quality(&prior, &SubmissionSet::Continuous { theta: 0.0 }).unwrap();
        assert!((q - 1.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-8);
        let zero =
            conference_quality(&prior, &SubmissionSet::Continuous { theta: f64::INFINITY })
                .unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn categorical_burden_is_geometric() {
        // single quality, P_acc = 0.5, m = 3, always submitted -> burden 6
        let prior = QualityPrior::Categorical { values: vec![1.0], probs: vec![1.0] };
        let eval = PolicyEval::Categorical { class_accept: vec![0.5], p_acc: vec![0.5] };
        let burden = review_burden(
            &prior,
            &SubmissionSet::Categorical { submitted: vec![true] },
            &eval,
            3,
        )
        .unwrap();
        assert!((burden - 6.0).abs() < 1e-12);
        let none = review_burden(
            &prior,
            &SubmissionSet::Categorical { submitted: vec![false] },
            &eval,
            3,
        )
        .unwrap();
        assert_eq!(none, 0.0);
    }

    #[test]
    fn acceptance_rate_single_quality() {
        let prior = QualityPrior::Categorical { values: vec![1.0], probs: vec![1.0] };
        let eval = PolicyEval::Categorical {
            class_accept: vec![1.0 / 3.0],
            p_acc: vec![1.0 / 3.0],
        };
        let a = acceptance_rate(
            &prior,
            &SubmissionSet::Categorical { submitted: vec![true] },
            &eval,
        )
        .unwrap();
        assert!((a - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn binary_burden_closed_form() {
        // alpha = 1, V = 5, eta = 0.7, m = 3: the most lenient maximum-quality
        // threshold pins P_acc(bad) = 3/43.
        for (beta, expect, tol) in [(0.7, 3.4, 0.1), (0.6, 6.7, 0.2)] {
            let s = binary_setting(1.0, beta, 3, 5.0, 0.7);
            let search =
                optimal_m_search(&s.prior, &s.review, &s.author, 3..=3).unwrap();
            let point = &search.points[0];
            assert!(
                (point.burden - expect).abs() < tol,
                "beta {beta}: burden {} vs {expect}",
                point.burden
            );
        }
    }

    #[test]
    fn most_lenient_target_is_exact() {
        let s = binary_setting(1.0, 0.7, 3, 5.0, 0.7);
        let table = OutcomeTable::build(&s.prior, &s.review, 3).unwrap();
        let tau = most_lenient_tau_for_target(&table, 0, 3.0 / 43.0).unwrap();
        let realized = threshold_policy_realize(tau, &table).unwrap();
        let ca = realized.class_accept(table.n_classes());
        let p_bad: f64 = table.classes.iter().zip(&ca).map(|(c, a)| c.lik[0] * a).sum();
        assert!((p_bad - 3.0 / 43.0).abs() < 1e-12);
    }

    #[test]
    fn perfect_reviews_need_one_review() {
        let s = binary_setting(1.0, 1.0, 1, 5.0, 0.7);
        let search = optimal_m_search(&s.prior, &s.review, &s.author, 1..=6).unwrap();
        let best = search.best.unwrap();
        assert_eq!(best.m, 1);
        assert!((best.burden - 0.5).abs() < 1e-9);
        let (_, feasible) =
            constrained_m_search(&s.prior, &s.review, &s.author, 1..=6, 3.0).unwrap();
        assert_eq!(feasible.unwrap().m, 1);
    }

    #[test]
    fn time_limited_converges_to_memoryless() {
        let s = binary_setting(1.0, 0.7, 3, 5.0, 0.7);
        let table = OutcomeTable::build(&s.prior, &s.review, 3).unwrap();
        let tau = most_lenient_tau_for_target(&table, 0, 3.0 / 43.0).unwrap();
        let realized = threshold_policy_realize(tau, &table).unwrap();
        let ca = realized.class_accept(table.n_classes());
        let p_acc: Vec<f64> = (0..2)
            .map(|qi| table.classes.iter().zip(&ca).map(|(c, a)| c.lik[qi] * a).sum())
            .collect();
        let eval = PolicyEval::Categorical { class_accept: ca, p_acc };
        let submission = SubmissionSet::Categorical { submitted: vec![false, true] };
        let (q_inf, r_inf) = (
            conference_quality(&s.prior, &submission).unwrap(),
            review_burden(&s.prior, &submission, &eval, 3).unwrap(),
        );
        let (q1, r1) = time_limited_metrics(&s.prior, &submission, &eval, 3, 1).unwrap();
        // T = 1: quality sum p q P_acc; burden m * submitted mass
        let p_good = eval.p_acc_idx(1);
        assert!((q1 - 0.5 * p_good).abs() < 1e-12);
        assert!((r1 - 1.5).abs() < 1e-12);
        let (q_big, r_big) = time_limited_metrics(&s.prior, &submission, &eval, 3, 1_000_000).unwrap();
        assert!((q_big - q_inf).abs() < 1e-9);
        assert!((r_big - r_inf).abs() < 1e-9);
        // monotone in T
        let mut prev_q = 0.0;
        let mut prev_r = 0.0;
        for t in [1, 2, 4, 8, 32, 128] {
            let (q, r) = time_limited_metrics(&s.prior, &submission, &eval, 3, t).unwrap();
            assert!(q >= prev_q - 1e-12 && r >= prev_r - 1e-12);
            prev_q = q;
            prev_r = r;
        }
    }
}
