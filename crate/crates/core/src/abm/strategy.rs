//! Author decision rules: one-step lookahead and exact backward induction.

use crate::abm::{BoundPolicy, RoundRule};
use crate::error::{Error, Result};
use crate::model::{Setting, TieBreak, U_MERGE_TOL};
use crate::outcomes::OutcomeTable;

/// Submit when the expected one-round acceptance probability clears 1/rho:
/// submitting once and then falling back to the sure bet beats the sure bet
/// now exactly when E[P_acc] * V + (1 - E[P_acc]) * eta > 1.
pub fn myopic_decision(expected_p_acc: f64, inv_rho: f64, tie: TieBreak) -> bool {
    let d = expected_p_acc - inv_rho;
    if d.abs() <= 1e-12 {
        return tie == TieBreak::Submit;
    }
    d > 0.0
}

/// Optimal submit/stop table for the binary model over states
/// (round, author signal, net review count), computed by backward induction.
#[derive(Debug, Clone)]
pub struct DpStrategy {
    /// submit[t-1][signal][net + m*(t-1)]
    submit: Vec<Vec<Vec<bool>>>,
    /// value[t-1][signal][net + m*(t-1)], in round-t units.
    value: Vec<Vec<Vec<f64>>>,
    m: usize,
}

impl DpStrategy {
    /// Decision at round `t` (1-based) for an author with signal index
    /// `signal` and cumulative net review count `net`.
    pub fn submit(&self, t: usize, signal: usize, net: i32) -> bool {
        let offset = (self.m * (t - 1)) as i32;
        let idx = (net + offset).clamp(0, 2 * offset) as usize;
        self.submit[t - 1][signal][idx]
    }

    pub fn value(&self, t: usize, signal: usize, net: i32) -> f64 {
        let offset = (self.m * (t - 1)) as i32;
        let idx = (net + offset).clamp(0, 2 * offset) as usize;
        self.value[t - 1][signal][idx]
    }

    pub fn horizon(&self) -> usize {
        self.submit.len()
    }
}

fn binomial_pmf(m: usize, p: f64) -> Vec<f64> {
    let mut pmf = vec![0.0; m + 1];
    for (k, slot) in pmf.iter_mut().enumerate() {
        let mut c = 1.0;
        for j in 0..k {
            c *= (m - j) as f64 / (j + 1) as f64;
        }
        *slot = c * p.powi(k as i32) * (1.0 - p).powi((m - k) as i32);
    }
    pmf
}

/// Exact best response for binary-model authors over a `rounds`-horizon game
/// against any supported policy, by backward induction. The state is the
/// round, the author's signal, and the net count of positive minus negative
/// reviews, which is a sufficient statistic for both the belief and the
/// cumulative-posterior acceptance rules.
pub fn optimal_strategy_dp(
    setting: &Setting,
    policy: &crate::model::Policy,
    rounds: usize,
    tie: TieBreak,
) -> Result<DpStrategy> {
    setting.validate()?;
    let table = OutcomeTable::build(&setting.prior, &setting.review, setting.m)?;
    let bound = crate::abm::bind_policy(&table, policy, rounds)?;
    optimal_strategy_dp_bound(setting, &table, &bound, tie)
}

pub(crate) fn optimal_strategy_dp_bound(
    setting: &Setting,
    table: &OutcomeTable,
    bound: &BoundPolicy,
    tie: TieBreak,
) -> Result<DpStrategy> {
    if table.q_values.len() != 2 || table.scores.len() != 2 {
        return Err(Error::Config(
            "dp strategy: requires the two-quality, two-signal model".into(),
        ));
    }
    let beta = table.confusion[1][1];
    if !(beta < 1.0) {
        return Err(Error::Config(
            "dp strategy: reviews must have full support (beta < 1)".into(),
        ));
    }
    let m = setting.m;
    let horizon = bound.horizon;
    let v = setting.author.value;
    let eta = setting.author.discount;
    let alpha = setting.author_confusion()?;
    let prior_good = table.q_probs[1];

    // Belief that the paper is good given the author signal and net count.
    let log_lr_review = (beta / (1.0 - beta)).ln();
    let belief = |signal: usize, net: i32| -> f64 {
        match &alpha {
            None => {
                // Noiseless: the signal is the truth.
                if signal == 1 {
                    1.0
                } else {
                    0.0
                }
            }
            Some(a) => {
                let l_good = a[1][signal];
                let l_bad = a[0][signal];
                if l_good <= 0.0 {
                    return 0.0;
                }
                if l_bad <= 0.0 {
                    return 1.0;
                }
                let log_odds = (prior_good / (1.0 - prior_good)).ln()
                    + (l_good / l_bad).ln()
                    + net as f64 * log_lr_review;
                1.0 / (1.0 + (-log_odds).exp())
            }
        }
    };

    let pmf_good = binomial_pmf(m, beta); // P(k positives | good)
    let pmf_bad = binomial_pmf(m, 1.0 - beta);

    // Acceptance probability of k new positives at round t with prior net c.
    let accept_prob = |t: usize, k: usize, net: i32| -> f64 {
        match &bound.rules[t - 1] {
            RoundRule::Classes(ca) => {
                let mut counts = vec![0u16; 2];
                counts[1] = k as u16;
                counts[0] = (m - k) as u16;
                table.class_of_counts(&counts).map(|ci| ca[ci]).unwrap_or(0.0)
            }
            RoundRule::Cumulative(tau) => {
                let new_net = net + (2 * k as i32 - m as i32);
                let counts = [
                    ((m * t) as i32 - new_net) as u32 / 2,
                    ((m * t) as i32 + new_net) as u32 / 2,
                ];
                if crate::abm::u_of_cum_counts(table, &counts) >= *tau - U_MERGE_TOL {
                    1.0
                } else {
                    0.0
                }
            }
        }
    };

    let mut submit = vec![Vec::new(); horizon];
    let mut value = vec![Vec::new(); horizon];
    // value_next[signal][net index at round t+1]
    let mut value_next = vec![vec![1.0; 2 * m * horizon + 1]; 2];

    for t in (1..=horizon).rev() {
        let width = 2 * m * (t - 1) + 1;
        let offset = (m * (t - 1)) as i32;
        let next_offset = (m * t) as i32;
        let mut submit_t = vec![vec![false; width]; 2];
        let mut value_t = vec![vec![1.0; width]; 2];
        for signal in 0..2 {
            for idx in 0..width {
                let net = idx as i32 - offset;
                let b = belief(signal, net);
                let mut submit_val = 0.0;
                for k in 0..=m {
                    let pk = b * pmf_good[k] + (1.0 - b) * pmf_bad[k];
                    if pk <= 0.0 {
                        continue;
                    }
                    let phi = accept_prob(t, k, net);
                    let next_net = net + (2 * k as i32 - m as i32);
                    let cont = if t == horizon {
                        1.0
                    } else {
                        value_next[signal][(next_net + next_offset) as usize]
                    };
                    submit_val += pk * (phi * v + (1.0 - phi) * eta * cont);
                }
                let go = match tie {
                    TieBreak::Submit => submit_val >= 1.0 - 1e-12,
                    TieBreak::NotSubmit => submit_val > 1.0 + 1e-12,
                };
                submit_t[signal][idx] = go;
                value_t[signal][idx] = if go { submit_val } else { 1.0 };
            }
        }
        value_next = value_t.clone();
        // pad lookup for rounds below t: value() clamps, so store as-is
        submit[t - 1] = submit_t;
        value[t - 1] = value_t;
    }

    Ok(DpStrategy { submit, value, m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abm::bind_policy;
    use crate::model::{binary_setting, Policy};

    fn dp_for(
        alpha: f64,
        beta: f64,
        m: usize,
        v: f64,
        eta: f64,
        policy: Policy,
        rounds: usize,
    ) -> (Setting, OutcomeTable, BoundPolicy, DpStrategy) {
        let setting = binary_setting(alpha, beta, m, v, eta);
        let table = OutcomeTable::build(&setting.prior, &setting.review, m).unwrap();
        let bound = bind_policy(&table, &policy, rounds).unwrap();
        let dp = optimal_strategy_dp_bound(&setting, &table, &bound, TieBreak::NotSubmit).unwrap();
        (setting, table, bound, dp)
    }

    #[test]
    fn one_round_dp_is_myopic() {
        let (setting, table, bound, dp) =
            dp_for(0.8, 0.75, 3, 5.0, 0.7, Policy::Threshold { tau: 0.0, r: 0.0 }, 1);
        let inv_rho = 1.0 / setting.rho();
        let p_acc = bound.p_acc[0].as_ref().unwrap();
        let alpha = setting.author_confusion().unwrap().unwrap();
        for signal in 0..2 {
            let belief =
                crate::abm::Belief::from_author_signal(&table.q_probs, &alpha, signal).unwrap();
            let e: f64 = belief.probs().iter().zip(p_acc).map(|(b, p)| b * p).sum();
            assert_eq!(
                dp.submit(1, signal, 0),
                myopic_decision(e, inv_rho, TieBreak::NotSubmit),
                "signal {signal}"
            );
        }
    }

    #[test]
    fn noiseless_submit_iff_odds_clear() {
        // P_acc(good) > 1/rho under the majority rule: submit at every state;
        // P_acc(bad) < 1/rho: never submit.
        let (setting, _table, bound, dp) =
            dp_for(1.0, 0.75, 3, 5.0, 0.7, Policy::Threshold { tau: 0.9, r: 0.0 }, 6);
        let inv_rho = 1.0 / setting.rho();
        let p = bound.p_acc[0].as_ref().unwrap();
        assert!(p[1] > inv_rho && p[0] < inv_rho);
        for t in 1..=6 {
            let w = (3 * (t - 1)) as i32;
            for net in -w..=w {
                assert!(dp.submit(t, 1, net), "good author stops at t={t} net={net}");
                assert!(!dp.submit(t, 0, net), "bad author submits at t={t} net={net}");
            }
        }
    }

    #[test]
    fn two_round_dp_matches_strategy_enumeration() {
        // T = 2, m = 1: enumerate all contingent strategies exactly and
        // compare the best expected utility with the DP value, per signal.
        let (setting, table, bound, dp) =
            dp_for(0.8, 0.75, 1, 5.0, 0.7, Policy::Threshold { tau: 0.0, r: 0.0 }, 2);
        let v = setting.author.value;
        let eta = setting.author.discount;
        let alpha = setting.author_confusion().unwrap().unwrap();
        let beta_rows = &table.confusion;
        let accept = |score: usize| -> f64 {
            match &bound.rules[0] {
                RoundRule::Classes(ca) => {
                    let mut counts = vec![0u16; 2];
                    counts[score] = 1;
                    table.class_of_counts(&counts).map(|ci| ca[ci]).unwrap_or(0.0)
                }
                _ => unreachable!(),
            }
        };

        for signal in 0..2 {
            // joint over quality given the signal
            let w: Vec<f64> =
                (0..2).map(|q| table.q_probs[q] * alpha[q][signal]).collect();
            let z: f64 = w.iter().sum();
            let post: Vec<f64> = w.iter().map(|x| x / z).collect();

            // strategies: stop now; or submit and then map each first-round
            // review score (on rejection) to submit/stop.
            let mut best = 1.0f64; // stop now
            for plan in 0..4u8 {
                let round2 = |s: usize| (plan >> s) & 1 == 1;
                let mut utility = 0.0;
                for q in 0..2 {
                    let pq = post[q];
                    for s1 in 0..2 {
                        let p_s1 = beta_rows[q][s1];
                        let a1 = accept(s1);
                        // accepted in round 1
                        utility += pq * p_s1 * a1 * v;
                        // rejected in round 1
                        let rej = pq * p_s1 * (1.0 - a1);
                        if round2(s1) {
                            for s2 in 0..2 {
                                let p_s2 = beta_rows[q][s2];
                                let a2 = accept(s2);
                                utility += rej * eta * p_s2 * (a2 * v + (1.0 - a2) * eta);
                            }
                        } else {
                            utility += rej * eta;
                        }
                    }
                }
                best = best.max(utility);
            }
            let dp_value = dp.value(1, signal, 0);
            assert!(
                (best - dp_value).abs() < 1e-12,
                "signal {signal}: enumeration {best} vs dp {dp_value}"
            );
        }
    }

    #[test]
    fn dp_value_dominates_myopic_play() {
        let (setting, table, bound, dp) =
            dp_for(0.75, 0.75, 3, 5.0, 0.5, Policy::Threshold { tau: 0.3, r: 0.0 }, 5);
        let inv_rho = 1.0 / setting.rho();
        let alpha = setting.author_confusion().unwrap().unwrap();
        let v = setting.author.value;
        let eta = setting.author.discount;
        let beta = table.confusion[1][1];
        let pmf_good = binomial_pmf(3, beta);
        let pmf_bad = binomial_pmf(3, 1.0 - beta);
        let p_acc = bound.p_acc[0].as_ref().unwrap();

        // Evaluate the myopic policy by forward recursion over the same state
        // space and check it never beats the DP value.
        let horizon = 5;
        let mut myo_next = vec![vec![1.0; 2 * 3 * horizon + 1]; 2];
        for t in (1..=horizon).rev() {
            let width = 2 * 3 * (t - 1) + 1;
            let offset = 3 * (t - 1) as i32;
            let next_offset = 3 * t as i32;
            let mut myo_t = vec![vec![1.0; width]; 2];
            for signal in 0..2 {
                for idx in 0..width {
                    let net = idx as i32 - offset;
                    let log_odds = (alpha[1][signal] / (0.0f64.max(alpha[0][signal])).max(1e-300))
                        .ln()
                        + net as f64 * (beta / (1.0 - beta)).ln();
                    let b = 1.0 / (1.0 + (-log_odds).exp());
                    let e: f64 = b * p_acc[1] + (1.0 - b) * p_acc[0];
                    let go = myopic_decision(e, inv_rho, TieBreak::NotSubmit);
                    if go {
                        let mut val = 0.0;
                        for k in 0..=3usize {
                            let pk = b * pmf_good[k] + (1.0 - b) * pmf_bad[k];
                            let mut counts = vec![0u16; 2];
                            counts[1] = k as u16;
                            counts[0] = (3 - k) as u16;
                            let phi = table
                                .class_of_counts(&counts)
                                .map(|ci| bound_rule_class(&bound, ci))
                                .unwrap_or(0.0);
                            let next_net = net + (2 * k as i32 - 3);
                            let cont = if t == horizon {
                                1.0
                            } else {
                                myo_next[signal][(next_net + next_offset) as usize]
                            };
                            val += pk * (phi * v + (1.0 - phi) * eta * cont);
                        }
                        myo_t[signal][idx] = val;
                    }
                }
            }
            for signal in 0..2 {
                for idx in 0..myo_t[signal].len() {
                    let net = idx as i32 - 3 * (t - 1) as i32;
                    let dp_v = dp.value(t, signal, net);
                    assert!(
                        dp_v >= myo_t[signal][idx] - 1e-9,
                        "t={t} signal={signal} net={net}: dp {dp_v} < myopic {}",
                        myo_t[signal][idx]
                    );
                }
            }
            myo_next = myo_t;
        }
    }

    fn bound_rule_class(bound: &BoundPolicy, ci: usize) -> f64 {
        match &bound.rules[0] {
            RoundRule::Classes(ca) => ca[ci],
            _ => unreachable!(),
        }
    }
}
