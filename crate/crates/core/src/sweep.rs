//! Quality/burden sweeps over acceptance thresholds and the Pareto frontier.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{
    acceptance_rate, conference_quality, de_facto_categorical, review_burden,
    submission_from_p_acc, time_limited_metrics, SubmissionSet,
};
use crate::error::Result;
use crate::model::{Policy, QualityPrior, ReviewModel, Setting, TieBreak};
use crate::outcomes::{threshold_policy_realize, OutcomeTable, PolicyEval};

/// One point of the quality/burden tradeoff traced by a threshold sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QBPoint {
    /// Raw acceptance threshold of this grid point.
    pub tau: f64,
    /// Knife-edge acceptance probability of the effective policy.
    pub r_eff: f64,
    /// De facto threshold induced in the authors (+-inf for trivial behavior).
    pub theta: f64,
    /// Conference quality; NaN under a Cauchy prior (undefined mean).
    pub quality: f64,
    /// Expected reviews per paper.
    pub burden: f64,
    /// Steady-state acceptance rate.
    pub acc_rate: f64,
    /// Not strictly dominated within this sweep.
    pub pareto: bool,
}

/// Mark the points not strictly dominated in (quality up, burden down).
/// Points with NaN quality are left unmarked and never dominate.
pub fn pareto_flags(points: &[(f64, f64)]) -> Vec<bool> {
    let mut idx: Vec<usize> = (0..points.len())
        .filter(|&i| points[i].0.is_finite() && points[i].1.is_finite())
        .collect();
    // burden ascending, quality descending within equal burden
    idx.sort_by(|&a, &b| {
        points[a]
            .1
            .total_cmp(&points[b].1)
            .then(points[b].0.total_cmp(&points[a].0))
    });
    let mut flags = vec![false; points.len()];
    let mut best_quality_strictly_cheaper = f64::NEG_INFINITY;
    let mut i = 0;
    while i < idx.len() {
        // group of equal burden
        let burden = points[idx[i]].1;
        let mut j = i;
        let mut group_max_quality = f64::NEG_INFINITY;
        while j < idx.len() && points[idx[j]].1 == burden {
            group_max_quality = group_max_quality.max(points[idx[j]].0);
            j += 1;
        }
        for &k in &idx[i..j] {
            let q = points[k].0;
            let dominated = best_quality_strictly_cheaper >= q || group_max_quality > q;
            flags[k] = !dominated;
        }
        best_quality_strictly_cheaper = best_quality_strictly_cheaper.max(group_max_quality);
        i = j;
    }
    flags
}

/// Apply [`pareto_flags`] to a list of sweep points in place.
pub fn pareto_filter(points: &mut [QBPoint]) {
    let qb: Vec<(f64, f64)> = points.iter().map(|p| (p.quality, p.burden)).collect();
    for (p, flag) in points.iter_mut().zip(pareto_flags(&qb)) {
        p.pareto = flag;
    }
}

/// Default threshold grid: `n` points spanning the quality range widened by
/// three noise scales, plus every exact posterior breakpoint in categorical
/// models (the curves are piecewise linear between breakpoints).
pub fn default_tau_grid(setting: &Setting, n: usize) -> Result<Vec<f64>> {
    let (lo_q, hi_q) = setting.prior.quality_range();
    let pad = match &setting.review {
        ReviewModel::Additive { noise } => 3.0 * noise.scale(),
        _ => 0.0,
    };
    Ok(tau_grid_over(setting, lo_q - pad, hi_q + pad, n))
}

/// Threshold grid over an explicit range, with categorical breakpoints added.
pub fn tau_grid_over(setting: &Setting, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = if n <= 1 {
        vec![lo]
    } else {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    };
    if !setting.review.is_continuous() {
        if let Ok(table) = OutcomeTable::build(&setting.prior, &setting.review, setting.m) {
            grid.extend(table.classes.iter().map(|c| c.u));
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    grid
}

/// Sweep a threshold grid and compute one tradeoff point per threshold,
/// including the accept-all and reject-all endpoints. Under a Cauchy prior
/// the quality column is NaN (acceptance rate and burden are still exact).
pub fn qb_sweep(setting: &Setting, taus: &[f64], tie: TieBreak) -> Result<Vec<QBPoint>> {
    qb_sweep_capped(setting, taus, tie, None)
}

/// [`qb_sweep`] with an optional cap on how often a paper may be submitted.
/// The submission decision is unchanged by the cap; quality and burden pick
/// up the probability of running out of rounds, and the acceptance rate pools
/// acceptances over expected submissions.
pub fn qb_sweep_capped(
    setting: &Setting,
    taus: &[f64],
    tie: TieBreak,
    rounds: Option<usize>,
) -> Result<Vec<QBPoint>> {
    setting.validate()?;
    let mut grid = taus.to_vec();
    grid.sort_by(f64::total_cmp);
    let mut points = if setting.review.is_continuous() {
        let mut pts: Vec<QBPoint> = grid
            .par_iter()
            .map(|&tau| qb_point_continuous(setting, tau, tie, rounds))
            .collect::<Result<_>>()?;
        // Trivial endpoints.
        pts.insert(
            0,
            QBPoint {
                tau: f64::NEG_INFINITY,
                r_eff: 1.0,
                theta: f64::NEG_INFINITY,
                quality: setting.prior.mean().unwrap_or(f64::NAN),
                burden: setting.m as f64,
                acc_rate: 1.0,
                pareto: false,
            },
        );
        pts.push(QBPoint {
            tau: f64::INFINITY,
            r_eff: 0.0,
            theta: f64::INFINITY,
            quality: if setting.prior.mean().is_ok() { 0.0 } else { f64::NAN },
            burden: 0.0,
            acc_rate: 0.0,
            pareto: false,
        });
        pts
    } else {
        let table = OutcomeTable::build(&setting.prior, &setting.review, setting.m)?;
        grid.par_iter()
            .map(|&tau| qb_point_categorical(setting, &table, tau, tie, rounds))
            .collect::<Result<_>>()?
    };
    pareto_filter(&mut points);
    Ok(points)
}

fn qb_point_categorical(
    setting: &Setting,
    table: &OutcomeTable,
    tau: f64,
    tie: TieBreak,
    rounds: Option<usize>,
) -> Result<QBPoint> {
    let realized = threshold_policy_realize(tau, table)?;
    let class_accept = realized.class_accept(table.n_classes());
    let p_acc: Vec<f64> = (0..table.q_values.len())
        .map(|qi| table.classes.iter().zip(&class_accept).map(|(c, a)| c.lik[qi] * a).sum())
        .collect();
    let eval = PolicyEval::Categorical { class_accept, p_acc };
    let inv_rho = 1.0 / setting.rho();
    let df = de_facto_categorical(table, &eval, inv_rho, tie);
    let (submitted, _) = submission_from_p_acc(eval.p_acc_vec(), inv_rho, tie);
    let submission = SubmissionSet::Categorical { submitted };
    let (quality, burden, acc_rate) = match rounds {
        None => (
            conference_quality(&setting.prior, &submission)?,
            review_burden(&setting.prior, &submission, &eval, setting.m)?,
            acceptance_rate(&setting.prior, &submission, &eval)?,
        ),
        Some(t) => {
            let (quality, burden) =
                time_limited_metrics(&setting.prior, &submission, &eval, setting.m, t)?;
            // acceptances per paper over expected submissions per paper
            let (values, probs) = setting.prior.categorical().expect("categorical");
            let accepted: f64 = values
                .iter()
                .zip(probs)
                .enumerate()
                .filter(|(i, _)| matches!(&submission, SubmissionSet::Categorical { submitted } if submitted[*i]))
                .map(|(i, (_, p))| p * (1.0 - (1.0 - eval.p_acc_idx(i)).powi(t as i32)))
                .sum();
            let subs = burden / setting.m as f64;
            (quality, burden, if subs > 0.0 { accepted / subs } else { 0.0 })
        }
    };
    Ok(QBPoint {
        tau,
        r_eff: realized.r_eff,
        theta: df.theta(),
        quality,
        burden,
        acc_rate,
        pareto: false,
    })
}

fn qb_point_continuous(
    setting: &Setting,
    tau: f64,
    tie: TieBreak,
    rounds: Option<usize>,
) -> Result<QBPoint> {
    let policy = Policy::Threshold { tau, r: 0.0 };
    let df = crate::analytics::de_facto_threshold(setting, &policy, tie)?;
    let theta = df.theta();
    let noise = match setting.review {
        ReviewModel::Additive { noise } => noise,
        _ => unreachable!("validated"),
    };
    let eval = PolicyEval::Continuous { noise, tau };
    let submission = SubmissionSet::Continuous { theta };
    let cauchy = matches!(setting.prior, QualityPrior::Cauchy { .. });
    let (quality, burden, acc_rate) = match rounds {
        None => (
            if cauchy { f64::NAN } else { conference_quality(&setting.prior, &submission)? },
            review_burden(&setting.prior, &submission, &eval, setting.m)?,
            acceptance_rate(&setting.prior, &submission, &eval)?,
        ),
        Some(t) => {
            if cauchy {
                return Err(crate::error::Error::Divergence(
                    "round-capped sweeps need a prior with a mean".into(),
                ));
            }
            let (quality, burden) =
                time_limited_metrics(&setting.prior, &submission, &eval, setting.m, t)?;
            let p_acc = |q: f64| eval.p_acc(None, q);
            let accepted = crate::numeric::integrate_upper_tail(
                |q| setting.prior.density(q) * (1.0 - (1.0 - p_acc(q)).powi(t as i32)),
                theta,
            )?;
            let subs = burden / setting.m as f64;
            (quality, burden, if subs > 0.0 { accepted / subs } else { 0.0 })
        }
    };
    Ok(QBPoint { tau, r_eff: 0.0, theta, quality, burden, acc_rate, pareto: false })
}
