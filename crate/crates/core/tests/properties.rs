//! Property tests for the orderings the analytic layer relies on.

use proptest::prelude::*;

use reviewsim_core::analytics::{
    review_burden, submission_from_p_acc, time_limited_metrics, SubmissionSet,
};
use reviewsim_core::model::{
    AuthorModel, NoiseModel, Policy, QualityPrior, ReviewModel, Setting, TieBreak,
};
use reviewsim_core::outcomes::OutcomeTable;
use reviewsim_core::sweep::{qb_sweep, tau_grid_over};
use reviewsim_core::{mix_with_uniform, posterior_expected_quality, threshold_policy_realize};

/// Binomial-row confusion matrices are informative (strict MLR) whenever the
/// success probabilities strictly increase.
fn binomial_confusion(ps: &[f64], n_scores: usize) -> Vec<Vec<f64>> {
    ps.iter()
        .map(|&p| {
            (0..n_scores)
                .map(|k| {
                    let mut c = 1.0;
                    for j in 0..k {
                        c *= (n_scores - 1 - j) as f64 / (j + 1) as f64;
                    }
                    c * p.powi(k as i32) * (1.0 - p).powi((n_scores - 1 - k) as i32)
                })
                .collect()
        })
        .collect()
}

prop_compose! {
    fn mlr_model()(
        seeds in prop::collection::vec(0.05f64..0.95, 2..5),
        n_scores in 2usize..5,
        raw_values in prop::collection::vec(-3.0f64..3.0, 2..5),
        raw_probs in prop::collection::vec(0.05f64..1.0, 2..5),
    ) -> (QualityPrior, ReviewModel) {
        let l = seeds.len().min(raw_values.len()).min(raw_probs.len());
        let mut ps: Vec<f64> = seeds[..l].to_vec();
        ps.sort_by(f64::total_cmp);
        for i in 1..l {
            ps[i] = ps[i].max(ps[i - 1] + 0.05).min(0.99);
        }
        let mut values: Vec<f64> = raw_values[..l].to_vec();
        values.sort_by(f64::total_cmp);
        for i in 1..l {
            if values[i] - values[i - 1] < 0.1 {
                values[i] = values[i - 1] + 0.1;
            }
        }
        let z: f64 = raw_probs[..l].iter().sum();
        let probs: Vec<f64> = raw_probs[..l].iter().map(|x| x / z).collect();
        (
            QualityPrior::Categorical { values, probs },
            ReviewModel::Categorical {
                scores: (0..n_scores).map(|s| s as f64).collect(),
                confusion: binomial_confusion(&ps, n_scores),
            },
        )
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Componentwise-larger review vectors have strictly larger posterior
    /// means under informative reviews, for any prior.
    #[test]
    fn posterior_mean_monotone_in_reviews(
        (prior, review) in mlr_model(),
        m in 1usize..4,
        raise in 0usize..3,
    ) {
        let (scores, _) = review.categorical_view().unwrap();
        let low = vec![scores[0]; m];
        let mut high = low.clone();
        let bump = (raise % m.min(scores.len() - 1).max(1)).min(m - 1);
        high[bump] = scores[1];
        let u_low = posterior_expected_quality(&prior, &review, &low).unwrap();
        let u_high = posterior_expected_quality(&prior, &review, &high).unwrap();
        prop_assert!(u_high > u_low, "U({high:?}) = {u_high} vs U({low:?}) = {u_low}");
    }

    /// Posterior responsibilities sum to one for any realizable vector.
    #[test]
    fn posterior_in_quality_range((prior, review) in mlr_model(), m in 1usize..4) {
        let table = OutcomeTable::build(&prior, &review, m).unwrap();
        let (lo, hi) = prior.quality_range();
        for class in &table.classes {
            prop_assert!(class.u >= lo - 1e-12 && class.u <= hi + 1e-12);
        }
        for qi in 0..table.q_values.len() {
            let total: f64 = table.classes.iter().map(|c| c.lik[qi]).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }

    /// A more attractive conference (larger rho) pays strictly more reviews
    /// at any shared non-trivial de facto threshold.
    #[test]
    fn attractiveness_raises_burden(
        (prior, review) in mlr_model(),
        m in 1usize..3,
        rho_small in 1.5f64..4.0,
        rho_boost in 1.2f64..3.0,
        q_pick in 0usize..4,
    ) {
        let table = OutcomeTable::build(&prior, &review, m).unwrap();
        let l = table.q_values.len();
        let qi = q_pick % l;
        if qi + 1 >= l {
            return Ok(());
        }
        let rho_large = rho_small * rho_boost;
        // Pin the de facto threshold at quality index qi in both settings.
        let mut burdens = Vec::new();
        for rho in [rho_small, rho_large] {
            let tau = reviewsim_core::analytics::most_lenient_tau_for_target(
                &table, qi, 1.0 / rho,
            ).unwrap();
            let realized = threshold_policy_realize(tau, &table).unwrap();
            let ca = realized.class_accept(table.n_classes());
            let p_acc: Vec<f64> = (0..l)
                .map(|q| table.classes.iter().zip(&ca).map(|(c, a)| c.lik[q] * a).sum())
                .collect();
            let (submitted, _) = submission_from_p_acc(&p_acc, 1.0 / rho, TieBreak::NotSubmit);
            // identical submission sets are required for the comparison
            let eval = reviewsim_core::outcomes::PolicyEval::Categorical {
                class_accept: ca,
                p_acc,
            };
            let burden = review_burden(
                &prior,
                &SubmissionSet::Categorical { submitted },
                &eval,
                m,
            ).unwrap();
            burdens.push(burden);
        }
        if burdens[0] > 0.0 && burdens[1] > 0.0 {
            prop_assert!(
                burdens[1] >= burdens[0] - 1e-12,
                "rho {rho_large} burden {} < rho {rho_small} burden {}",
                burdens[1],
                burdens[0]
            );
        }
    }

    /// Burden grows monotonically with the round cap, and quality converges
    /// to the memoryless value inside the geometric truncation envelope.
    #[test]
    fn round_caps_converge(
        (prior, review) in mlr_model(),
        m in 1usize..3,
        tau_frac in 0.05f64..0.95,
    ) {
        let table = OutcomeTable::build(&prior, &review, m).unwrap();
        let lo = table.classes[0].u;
        let hi = table.max_quality();
        let tau = lo + tau_frac * (hi - lo);
        let realized = threshold_policy_realize(tau, &table).unwrap();
        let ca = realized.class_accept(table.n_classes());
        let l = table.q_values.len();
        let p_acc: Vec<f64> = (0..l)
            .map(|q| table.classes.iter().zip(&ca).map(|(c, a)| c.lik[q] * a).sum())
            .collect();
        let eval = reviewsim_core::outcomes::PolicyEval::Categorical { class_accept: ca, p_acc: p_acc.clone() };
        let (submitted, _) = submission_from_p_acc(&p_acc, 0.25, TieBreak::NotSubmit);
        if submitted.iter().zip(&p_acc).any(|(s, p)| *s && *p < 1e-12) {
            return Ok(());
        }
        let submission = SubmissionSet::Categorical { submitted: submitted.clone() };
        let q_inf = reviewsim_core::analytics::conference_quality(&prior, &submission).unwrap();
        let (values, probs) = prior.categorical().unwrap();
        let mut prev_burden = 0.0f64;
        for t in [1usize, 2, 5, 20, 200] {
            let (q, r) = time_limited_metrics(&prior, &submission, &eval, m, t).unwrap();
            prop_assert!(r >= prev_burden - 1e-12, "burden fell from {prev_burden} to {r}");
            prev_burden = r;
            // |quality error| bounded by the leftover geometric mass
            let envelope: f64 = values
                .iter()
                .zip(probs)
                .zip(&submitted)
                .zip(&p_acc)
                .filter(|(((_, _), s), _)| **s)
                .map(|(((v, p), _), pa)| p * v.abs() * (1.0 - pa).powi(t as i32))
                .sum();
            prop_assert!(
                (q - q_inf).abs() <= envelope + 1e-12,
                "cap {t}: quality {q} vs memoryless {q_inf}, envelope {envelope}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Blurring the reviews with a uniform mixture never improves the
    /// tradeoff: every non-trivial point of the blurred sweep is weakly
    /// dominated by the sharp policy pinned at the same submission boundary
    /// (single review, informative signals).
    #[test]
    fn uniform_mixture_never_improves_the_sweep(
        (prior, review) in mlr_model(),
        lambda in 0.2f64..0.95,
        rho in 1.5f64..8.0,
    ) {
        let (scores, confusion) = review.categorical_view().unwrap();
        let mixed = ReviewModel::Categorical {
            scores: scores.clone(),
            confusion: mix_with_uniform(&confusion, lambda).unwrap(),
        };
        let inv_rho = 1.0 / rho;
        let eta = 0.5;
        let author = AuthorModel::noiseless(rho * (1.0 - eta) + eta, eta);
        let sharp_table = OutcomeTable::build(&prior, &review, 1).unwrap();
        let mixed_setting = Setting { prior: prior.clone(), review: mixed, author, m: 1 };
        let grid_mixed = tau_grid_over(&mixed_setting, -3.5, 3.5, 120);
        let blurred = qb_sweep(&mixed_setting, &grid_mixed, TieBreak::NotSubmit).unwrap();
        let l = sharp_table.q_values.len();
        let sharp_eval_at = |tau: f64| {
            let realized = threshold_policy_realize(tau, &sharp_table).unwrap();
            let ca = realized.class_accept(sharp_table.n_classes());
            let p_acc: Vec<f64> = (0..l)
                .map(|q| sharp_table.classes.iter().zip(&ca).map(|(c, a)| c.lik[q] * a).sum())
                .collect();
            reviewsim_core::outcomes::PolicyEval::Categorical { class_accept: ca, p_acc }
        };
        for point in blurred.iter().filter(|p| p.burden > 1e-9 && p.tau.is_finite()) {
            if !point.theta.is_finite() {
                // all qualities submitted: the sharp accept-all point matches
                // the quality (prior mean) at the minimum burden of one review
                prop_assert!(point.burden >= 1.0 - 1e-9);
                continue;
            }
            let boundary = sharp_table
                .q_values
                .iter()
                .position(|&q| (q - point.theta).abs() < 1e-9)
                .expect("boundary quality in the support");
            let tau = reviewsim_core::analytics::most_lenient_tau_for_target(
                &sharp_table,
                boundary,
                inv_rho,
            )
            .unwrap();
            let eval = sharp_eval_at(tau);
            let (submitted, _) = submission_from_p_acc(eval.p_acc_vec(), inv_rho, TieBreak::NotSubmit);
            let submission = SubmissionSet::Categorical { submitted };
            let quality =
                reviewsim_core::analytics::conference_quality(&prior, &submission).unwrap();
            let burden = review_burden(&prior, &submission, &eval, 1).unwrap();
            prop_assert!(
                quality >= point.quality - 1e-9 && burden <= point.burden + 1e-9,
                "sharp (q {quality}, b {burden}) does not dominate blurred (q {}, b {}) at lambda {lambda}",
                point.quality,
                point.burden
            );
        }
    }
}

#[test]
fn cauchy_sweeps_report_rate_and_burden_only() {
    let setting = Setting {
        prior: QualityPrior::Cauchy { x0: 0.0, gamma: 1.0 },
        review: ReviewModel::Additive { noise: NoiseModel::Gaussian { sigma: 1.0 } },
        author: AuthorModel::noiseless(5.0, 0.7),
        m: 1,
    };
    let points = qb_sweep(&setting, &[0.0, 1.0, 2.0], TieBreak::NotSubmit).unwrap();
    for p in points.iter().filter(|p| p.tau.is_finite()) {
        assert!(p.quality.is_nan(), "Cauchy quality must be undefined");
        assert!(!p.pareto);
        assert!(p.burden.is_finite() && p.acc_rate.is_finite());
        assert!((0.0..=1.0).contains(&p.acc_rate));
    }
    // asking for the quality itself is a divergence error
    let err = reviewsim_core::analytics::conference_quality(
        &setting.prior,
        &SubmissionSet::Continuous { theta: 0.0 },
    )
    .unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn longer_caps_reach_higher_quality_in_the_continuous_family() {
    // Double-Gaussian model: the maximum achievable quality over a threshold
    // grid grows with the round cap.
    let setting = Setting {
        prior: QualityPrior::Gaussian { mu: 0.0, sigma: 1.0 },
        review: ReviewModel::Additive { noise: NoiseModel::Gaussian { sigma: 0.5 } },
        author: AuthorModel::noiseless(3.0, 0.7),
        m: 1,
    };
    let grid: Vec<f64> = (0..60).map(|i| -2.0 + 4.0 * i as f64 / 59.0).collect();
    let mut prev_max = f64::NEG_INFINITY;
    for rounds in [1usize, 2, 4, 10] {
        let mut best: f64 = f64::NEG_INFINITY;
        for &tau in &grid {
            let policy = Policy::TimeLimitedFixed { tau, r: 0.0, rounds };
            let df = reviewsim_core::analytics::de_facto_threshold(
                &setting,
                &policy,
                TieBreak::NotSubmit,
            )
            .unwrap();
            let eval = reviewsim_core::outcomes::PolicyEval::Continuous {
                noise: NoiseModel::Gaussian { sigma: 0.5 },
                tau,
            };
            let submission = SubmissionSet::Continuous { theta: df.theta() };
            let (q, _) =
                time_limited_metrics(&setting.prior, &submission, &eval, 1, rounds).unwrap();
            best = best.max(q);
        }
        assert!(
            best > prev_max + 1e-6,
            "cap {rounds}: max quality {best} did not improve on {prev_max}"
        );
        prev_max = best;
    }
}

#[test]
fn quick_acceptance_within_three_rounds_needs_few_reviews() {
    // With decent reviews, requiring submitted papers to clear in three
    // expected rounds costs at most three reviews per round.
    for beta in [0.75, 0.8, 0.85, 0.9, 0.95] {
        let s = reviewsim_core::binary_setting(1.0, beta, 1, 5.0, 0.7);
        let (_, feasible) = reviewsim_core::analytics::constrained_m_search(
            &s.prior,
            &s.review,
            &s.author,
            1..=10,
            3.0,
        )
        .unwrap();
        let point = feasible.expect("feasible at strong review quality");
        assert!(point.m <= 3, "beta {beta}: minimal m = {}", point.m);
        assert!(point.expected_rounds <= 3.0 + 1e-9);
    }
}
