//! Search over time-limited acceptance policies in the binary model.
//!
//! Candidates enumerate per-round thresholds for the first `enumerated`
//! rounds; later rounds are pinned to a fixed rule (by default: accept when
//! at least two of the three new reviews are positive, applied per round).
//! Each candidate is simulated with best-responding authors and the
//! quality/burden Pareto set is reported.

use rayon::prelude::*;
use serde::Serialize;

use crate::abm::{simulate, RunMetrics, SimConfig};
use crate::config::StrategyKind;
use crate::error::{Error, Result};
use crate::model::{Policy, Setting, TieBreak};
use crate::outcomes::OutcomeTable;
use crate::sweep::pareto_flags;

/// Policy family searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MemoryFamily {
    /// One threshold for every round (time-limited fixed threshold).
    Fixed,
    /// Per-round thresholds applied to the current round's reviews.
    RoundDependent,
    /// Per-round thresholds applied to the posterior over all reviews so far.
    ReviewFollowing,
}

#[derive(Debug, Clone)]
pub struct MemorySearchConfig {
    /// Binary setting (two qualities, two signals).
    pub setting: Setting,
    /// Candidate thresholds per enumerated round.
    pub candidates: Vec<f64>,
    /// Rounds whose thresholds are enumerated (the paper's protocol: 3).
    pub enumerated: usize,
    /// Total rounds before the forced sure bet (the paper's protocol: 5).
    pub total_rounds: usize,
    pub n: usize,
    pub seed: u64,
    /// Pin rounds enumerated+1..total to the per-round two-of-three rule.
    /// When false, those rounds use the cumulative posterior with the same
    /// net-count bar instead.
    pub tail_two_of_three_per_round: bool,
    pub tie: TieBreak,
}

/// One evaluated candidate.
#[derive(Debug, Clone, Serialize)]
pub struct MemoryCandidate {
    pub family: MemoryFamily,
    /// Enumerated thresholds (length 1 for `Fixed`).
    pub taus: Vec<f64>,
    pub quality: f64,
    pub burden: f64,
    pub acc_rate: f64,
    pub pareto: bool,
}

/// Posterior mean after observing `net` more positive than negative reviews
/// in the binary model; the bar for "two of three positive" is net = +1.
pub fn binary_net_posterior(setting: &Setting, net: i32) -> Result<f64> {
    let table = OutcomeTable::build(&setting.prior, &setting.review, setting.m)?;
    let counts_pos = net.max(0) as u32;
    let counts_neg = (-net).max(0) as u32;
    Ok(crate::abm::u_of_cum_counts(&table, &[counts_neg, counts_pos]))
}

fn candidate_policy(
    family: MemoryFamily,
    taus: &[f64],
    cfg: &MemorySearchConfig,
    two_of_three_u: f64,
) -> Policy {
    match family {
        MemoryFamily::Fixed => Policy::TimeLimitedFixed {
            tau: taus[0],
            // accept at the threshold: the search treats thresholds as
            // inclusive bars on the posterior mean
            r: 1.0,
            rounds: cfg.total_rounds,
        },
        MemoryFamily::RoundDependent => {
            let mut full = taus.to_vec();
            full.resize(cfg.total_rounds, two_of_three_u);
            Policy::RoundDependent { taus: full }
        }
        MemoryFamily::ReviewFollowing => {
            let mut full = taus.to_vec();
            full.resize(cfg.total_rounds, two_of_three_u);
            Policy::ReviewFollowing { taus: full }
        }
    }
}

/// Evaluate one family over the candidate grid and mark its Pareto set.
pub fn policy_search_memory(
    cfg: &MemorySearchConfig,
    family: MemoryFamily,
) -> Result<Vec<MemoryCandidate>> {
    cfg.setting.validate()?;
    let (values, _) = cfg
        .setting
        .prior
        .categorical()
        .ok_or_else(|| Error::Config("memory search: categorical prior required".into()))?;
    if values.len() != 2 {
        return Err(Error::Config("memory search: binary model required".into()));
    }
    if cfg.enumerated > cfg.total_rounds {
        return Err(Error::Config("memory search: enumerated rounds exceed total".into()));
    }
    // Net-count bar equivalent to "two of three new reviews positive".
    let two_of_three_u = binary_net_posterior(&cfg.setting, 1)?;

    let vectors: Vec<Vec<f64>> = match family {
        MemoryFamily::Fixed => cfg.candidates.iter().map(|&t| vec![t]).collect(),
        _ => {
            let mut out = Vec::with_capacity(cfg.candidates.len().pow(cfg.enumerated as u32));
            let mut current = vec![0.0; cfg.enumerated];
            enumerate_vectors(&cfg.candidates, 0, &mut current, &mut out);
            out
        }
    };

    let metrics: Vec<(Vec<f64>, RunMetrics)> = vectors
        .par_iter()
        .map(|taus| {
            let policy = candidate_policy(family, taus, cfg, two_of_three_u);
            let sim = SimConfig {
                setting: cfg.setting.clone(),
                policy,
                n: cfg.n,
                rounds: cfg.total_rounds,
                seed: cfg.seed,
                strategy: StrategyKind::OptimalDp,
                tie: cfg.tie,
            };
            let run = if family == MemoryFamily::ReviewFollowing
                && cfg.tail_two_of_three_per_round
            {
                simulate_with_tail_override(&sim, cfg.enumerated)?
            } else {
                simulate(&sim)?
            };
            Ok((taus.clone(), run))
        })
        .collect::<Result<_>>()?;

    let flags = pareto_flags(
        &metrics.iter().map(|(_, m)| (m.quality, m.burden)).collect::<Vec<_>>(),
    );
    Ok(metrics
        .into_iter()
        .zip(flags)
        .map(|((taus, m), pareto)| MemoryCandidate {
            family,
            taus,
            quality: m.quality,
            burden: m.burden,
            acc_rate: m.acc_rate,
            pareto,
        })
        .collect())
}

// Review-following candidates with the tail override keep the cumulative
// rule for the enumerated rounds and switch to per-round thresholds after.
fn simulate_with_tail_override(sim: &SimConfig, enumerated: usize) -> Result<RunMetrics> {
    let taus = match &sim.policy {
        Policy::ReviewFollowing { taus } => taus.clone(),
        _ => return Err(Error::Config("tail override: review-following policy expected".into())),
    };
    crate::abm::simulate_mixed_review_following(sim, &taus, enumerated)
}

fn enumerate_vectors(
    candidates: &[f64],
    depth: usize,
    current: &mut Vec<f64>,
    out: &mut Vec<Vec<f64>>,
) {
    if depth == current.len() {
        out.push(current.clone());
        return;
    }
    for &c in candidates {
        current[depth] = c;
        enumerate_vectors(candidates, depth + 1, current, out);
    }
}

/// Median threshold of the last enumerated round over the Pareto set; used to
/// summarize whether early rounds are stricter than late ones.
pub fn pareto_structure(candidates: &[MemoryCandidate]) -> Option<(Vec<f64>, f64)> {
    let pareto: Vec<&MemoryCandidate> = candidates.iter().filter(|c| c.pareto).collect();
    if pareto.is_empty() {
        return None;
    }
    let best = pareto
        .iter()
        .max_by(|a, b| a.quality.total_cmp(&b.quality))
        .expect("non-empty");
    let mut last: Vec<f64> = pareto
        .iter()
        .filter_map(|c| c.taus.last().copied())
        .collect();
    last.sort_by(f64::total_cmp);
    let median = last[last.len() / 2];
    Some((best.taus.clone(), median))
}
