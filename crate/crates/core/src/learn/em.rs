//! EM estimation of the tier prior and reviewer confusion matrix, with the
//! anti-overfitting perturbation and held-out snapshot selection, plus
//! cross-validation over the number of tiers.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::learn::{ReviewDataset, N_SCORES};

#[derive(Debug, Clone, Copy)]
pub struct EmOptions {
    pub iterations: usize,
    /// Weight of the uniform row mixed into the confusion matrix after every
    /// iteration.
    pub perturb: f64,
    /// Seed for the randomized row initialization.
    pub init_seed: u64,
    /// Independent EM starts; the snapshot with the best held-out likelihood
    /// across starts wins.
    pub starts: usize,
    /// Dirichlet pseudo-observations added in the M-step (per row and to the
    /// tier weights).
    pub smoothing: f64,
}

impl Default for EmOptions {
    fn default() -> Self {
        EmOptions { iterations: 100, perturb: 0.01, init_seed: 0, starts: 3, smoothing: 3.0 }
    }
}

/// Result of one EM run: the snapshot with the best held-out log-likelihood.
#[derive(Debug, Clone)]
pub struct EmFit {
    pub p_hat: Vec<f64>,
    pub beta_hat: Vec<Vec<f64>>,
    /// Held-out log-likelihood after each iteration.
    pub test_loglik: Vec<f64>,
    /// Iteration whose snapshot was returned (earliest maximum).
    pub best_iteration: usize,
    /// Parameters after the last iteration (fully run EM, perturbed).
    pub p_final: Vec<f64>,
    pub beta_final: Vec<Vec<f64>>,
}

/// Score-ordered initialization: each row is the pooled score histogram
/// (smoothed toward uniform) exponentially tilted toward its tier's end of
/// the score scale, with small seeded jitter. Tilting anchors the labels in
/// score order and keeps extreme tiers from being swallowed by the bulk.
fn init_beta(papers: &[Vec<u8>], l: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand::Rng;
    let mut pooled = [0.0f64; N_SCORES];
    for p in papers {
        for &s in p {
            pooled[s as usize] += 1.0;
        }
    }
    let total: f64 = pooled.iter().sum();
    let total = if total > 0.0 { total } else { 1.0 };
    let mean_score: f64 = pooled
        .iter()
        .enumerate()
        .map(|(s, h)| s as f64 * h / total)
        .sum();
    // Separation scale cycles with the start index (high bits of the seed):
    // gently separated starts pass through underfit configurations, strongly
    // separated ones land near converged optima; the held-out snapshot rule
    // picks whichever trajectory generalizes best.
    const SCALES: [f64; 6] = [0.05, 0.1, 0.2, 0.4, 0.8, 1.6];
    let scale = SCALES[((seed >> 32) as usize) % SCALES.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..l)
        .map(|k| {
            let kappa = if l > 1 {
                scale * (2.0 * k as f64 / (l - 1) as f64 - 1.0)
            } else {
                0.0
            };
            let mut row: Vec<f64> = pooled
                .iter()
                .enumerate()
                .map(|(sc, h)| {
                    let base = 0.8 * h / total + 0.2 / N_SCORES as f64;
                    let jitter: f64 = 1.0 + 0.01 * (rng.random::<f64>() - 0.5);
                    base * (kappa * (sc as f64 - mean_score)).exp() * jitter
                })
                .collect();
            let z: f64 = row.iter().sum();
            for x in &mut row {
                *x /= z;
            }
            row
        })
        .collect()
}

/// Run EM on the training papers for a fixed number of tiers, evaluating the
/// held-out log-likelihood after every (perturbed) iteration and returning the
/// best snapshot.
pub fn em_fit(
    train: &[Vec<u8>],
    test: &[Vec<u8>],
    l: usize,
    opts: EmOptions,
) -> Result<EmFit> {
    let starts = opts.starts.max(1);
    let mut best: Option<EmFit> = None;
    for start in 0..starts {
        let run_opts = EmOptions {
            init_seed: opts.init_seed.wrapping_add((start as u64) << 32),
            ..opts
        };
        let fit = em_fit_inner(train, test, l, run_opts)?;
        let better = best
            .as_ref()
            .map(|b| {
                fit.test_loglik[fit.best_iteration] > b.test_loglik[b.best_iteration]
            })
            .unwrap_or(true);
        if better {
            best = Some(fit);
        }
    }
    Ok(best.expect("at least one start"))
}

/// Papers compressed to distinct score-count patterns with multiplicities;
/// reviews are exchangeable, so identical multisets share responsibilities.
struct Patterns {
    counts: Vec<[f64; N_SCORES]>,
    mult: Vec<f64>,
    n_reviews: Vec<f64>,
    n_papers: f64,
}

impl Patterns {
    fn build(papers: &[Vec<u8>]) -> Patterns {
        let mut index: std::collections::HashMap<[u16; N_SCORES], usize> =
            std::collections::HashMap::new();
        let mut counts = Vec::new();
        let mut mult = Vec::new();
        for scores in papers {
            let mut key = [0u16; N_SCORES];
            for &s in scores {
                key[s as usize] += 1;
            }
            match index.get(&key) {
                Some(&i) => mult[i] += 1.0,
                None => {
                    index.insert(key, counts.len());
                    counts.push(key.map(f64::from));
                    mult.push(1.0);
                }
            }
        }
        let n_reviews = counts
            .iter()
            .map(|c| c.iter().sum::<f64>())
            .collect();
        Patterns { counts, mult, n_reviews, n_papers: papers.len() as f64 }
    }

    /// Ordered-sequence likelihood of one pattern per tier (the multinomial
    /// coefficient never enters: responsibilities and log-likelihood ratios
    /// are over review sequences).
    fn lik(&self, i: usize, p: &[f64], beta: &[Vec<f64>], out: &mut [f64]) {
        for (k, (pk, row)) in p.iter().zip(beta).enumerate() {
            let mut v = *pk;
            for (s, &c) in self.counts[i].iter().enumerate() {
                if c > 0.0 {
                    v *= row[s].powi(c as i32);
                }
            }
            out[k] = v;
        }
    }

    fn loglik(&self, p: &[f64], beta: &[Vec<f64>]) -> f64 {
        let mut lik = vec![0.0; p.len()];
        (0..self.counts.len())
            .map(|i| {
                self.lik(i, p, beta, &mut lik);
                self.mult[i] * lik.iter().sum::<f64>().max(1e-300).ln()
            })
            .sum()
    }
}

fn em_fit_inner(
    train: &[Vec<u8>],
    test: &[Vec<u8>],
    l: usize,
    opts: EmOptions,
) -> Result<EmFit> {
    if l < 1 {
        return Err(Error::Config("L: must be at least 1".into()));
    }
    if train.is_empty() {
        return Err(Error::Config("training split: empty".into()));
    }
    let patterns = Patterns::build(train);
    let test_patterns = Patterns::build(test);

    let mut p = vec![1.0 / l as f64; l];
    let mut beta = init_beta(train, l, opts.init_seed);
    let uniform = 1.0 / N_SCORES as f64;

    let mut best: Option<(f64, Vec<f64>, Vec<Vec<f64>>, usize)> = None;
    let mut history = Vec::with_capacity(opts.iterations);
    let mut resp = vec![vec![0.0; l]; patterns.counts.len()];

    for iter in 0..opts.iterations {
        // E-step: responsibilities per distinct pattern.
        for (i, r) in resp.iter_mut().enumerate() {
            patterns.lik(i, &p, &beta, r);
            let z: f64 = r.iter().sum();
            if z > 0.0 {
                for x in r.iter_mut() {
                    *x /= z;
                }
            } else {
                let u = 1.0 / l as f64;
                for x in r.iter_mut() {
                    *x = u;
                }
            }
        }

        // M-step with light Dirichlet smoothing: a few pseudo-observations
        // per tier stabilize the weakly identified boundary between adjacent
        // tiers (plain maximum likelihood wanders along a flat ridge there).
        let row_pseudo = opts.smoothing;
        let weight_pseudo = opts.smoothing;
        for k in 0..l {
            let weight: f64 = resp
                .iter()
                .zip(&patterns.mult)
                .map(|(r, m)| r[k] * m)
                .sum();
            p[k] = (weight + weight_pseudo / l as f64)
                / (patterns.n_papers + weight_pseudo);
            let denom: f64 = resp
                .iter()
                .zip(&patterns.mult)
                .zip(&patterns.n_reviews)
                .map(|((r, m), n)| r[k] * m * n)
                .sum();
            if denom + row_pseudo > 1e-300 {
                for s in 0..N_SCORES {
                    let num: f64 = resp
                        .iter()
                        .zip(&patterns.mult)
                        .zip(&patterns.counts)
                        .map(|((r, m), c)| r[k] * m * c[s])
                        .sum();
                    beta[k][s] = (num + row_pseudo / N_SCORES as f64) / (denom + row_pseudo);
                }
            } else {
                beta[k] = vec![uniform; N_SCORES];
            }
        }

        // Perturb each row toward uniform; snapshots and the held-out
        // likelihood use the perturbed matrix (it keeps unseen scores off
        // zero probability and damps overfitting), while the EM recursion
        // itself continues from the unperturbed M-step - feeding the uniform
        // mix back in systematically bleeds probability out of tiers with
        // near-degenerate rows.
        let perturbed: Vec<Vec<f64>> = beta
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| (1.0 - opts.perturb) * *x + opts.perturb * uniform)
                    .collect()
            })
            .collect();

        let ll = test_patterns.loglik(&p, &perturbed);
        history.push(ll);
        let improved = best.as_ref().map(|(b, ..)| ll > *b).unwrap_or(true);
        if improved {
            best = Some((ll, p.clone(), perturbed.clone(), iter));
        }
        if iter + 1 == opts.iterations {
            beta = perturbed;
        }
    }

    let (_, p_hat, beta_hat, best_iteration) = best.expect("at least one iteration");
    Ok(EmFit {
        p_hat,
        beta_hat,
        test_loglik: history,
        best_iteration,
        p_final: p,
        beta_final: beta,
    })
}

/// Sort tiers by the expected score of their confusion row, reordering the
/// prior to match. Keeps reported parameters aligned across folds.
pub fn sort_by_expected_score(p: &mut Vec<f64>, beta: &mut Vec<Vec<f64>>) {
    let expected = |row: &[f64]| -> f64 {
        row.iter().enumerate().map(|(s, w)| s as f64 * w).sum()
    };
    let mut order: Vec<usize> = (0..beta.len()).collect();
    order.sort_by(|&a, &b| expected(&beta[a]).total_cmp(&expected(&beta[b])));
    *p = order.iter().map(|&i| p[i]).collect();
    *beta = order.iter().map(|&i| beta[i].clone()).collect();
}

/// Cross-validation over tier counts.
#[derive(Debug, Clone)]
pub struct CvResult {
    pub best_l: usize,
    /// (L, fold-averaged best held-out log-likelihood) per candidate.
    pub scores: Vec<(usize, f64)>,
    /// Fold standard error of the averaged score, per candidate.
    pub score_ses: Vec<(usize, f64)>,
    /// Fold-averaged parameters of the winning L, score-order aligned.
    pub p_hat: Vec<f64>,
    pub beta_hat: Vec<Vec<f64>>,
}

/// Five-fold cross-validation: for each candidate tier count, average the
/// best held-out log-likelihood over folds, then select the smallest L whose
/// average lands within one fold standard error of the maximum (larger tier
/// counts sit on a likelihood plateau; the one-SE rule resolves the plateau
/// toward parsimony). The returned parameters average the winning L's
/// fold-wise snapshots after score-order alignment.
pub fn cross_validate(
    data: &ReviewDataset,
    l_range: std::ops::RangeInclusive<usize>,
    folds: usize,
    seed: u64,
    opts: EmOptions,
) -> Result<CvResult> {
    if data.len() < folds {
        return Err(Error::Config(format!(
            "dataset: {} papers cannot fill {folds} folds",
            data.len()
        )));
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let fold_of = |pos: usize| pos % folds;

    let ls: Vec<usize> = l_range.collect();
    let jobs: Vec<(usize, usize)> = ls
        .iter()
        .flat_map(|&l| (0..folds).map(move |f| (l, f)))
        .collect();
    let fits: Vec<((usize, usize), EmFit)> = jobs
        .par_iter()
        .map(|&(l, fold)| {
            let mut train = Vec::new();
            let mut test = Vec::new();
            for (pos, &i) in order.iter().enumerate() {
                if fold_of(pos) == fold {
                    test.push(data.papers[i].clone());
                } else {
                    train.push(data.papers[i].clone());
                }
            }
            let job_opts = EmOptions {
                init_seed: seed
                    .wrapping_mul(1_000_003)
                    .wrapping_add((l * 97 + fold) as u64),
                ..opts
            };
            em_fit(&train, &test, l, job_opts).map(|fit| ((l, fold), fit))
        })
        .collect::<Result<_>>()?;

    let mut scores = Vec::new();
    let mut score_ses = Vec::new();
    let mut fold_scores: Vec<(usize, Vec<f64>)> = Vec::new();
    for &l in &ls {
        let mut per_fold: Vec<(usize, f64)> = fits
            .iter()
            .filter(|((fl, _), _)| *fl == l)
            .map(|((_, fold), fit)| (*fold, fit.test_loglik[fit.best_iteration]))
            .collect();
        per_fold.sort_by_key(|(fold, _)| *fold);
        let per_fold: Vec<f64> = per_fold.into_iter().map(|(_, s)| s).collect();
        let avg: f64 = per_fold.iter().sum::<f64>() / folds as f64;
        let var: f64 = per_fold.iter().map(|x| (x - avg).powi(2)).sum::<f64>()
            / (folds as f64 - 1.0);
        scores.push((l, avg));
        score_ses.push((l, (var / folds as f64).sqrt()));
        fold_scores.push((l, per_fold));
    }
    let (max_l, _) = scores
        .iter()
        .cloned()
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
        .expect("non-empty L range");
    let max_folds = &fold_scores.iter().find(|(l, _)| *l == max_l).expect("present").1;
    // Smallest L statistically indistinguishable from the best: the per-fold
    // score differences are paired, which removes fold-difficulty variance.
    let best_l = fold_scores
        .iter()
        .filter(|(l, per_fold)| {
            let d: Vec<f64> = max_folds.iter().zip(per_fold).map(|(a, b)| a - b).collect();
            let mean = d.iter().sum::<f64>() / folds as f64;
            let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>()
                / (folds as f64 - 1.0);
            let se = (var / folds as f64).sqrt();
            *l == max_l || mean <= se
        })
        .map(|(l, _)| *l)
        .min()
        .unwrap_or(max_l);

    // Average the winning L's fold snapshots after score-order alignment.
    let mut p_hat = vec![0.0; best_l];
    let mut beta_hat = vec![vec![0.0; N_SCORES]; best_l];
    for ((l, _), fit) in &fits {
        if *l != best_l {
            continue;
        }
        let mut p = fit.p_hat.clone();
        let mut b = fit.beta_hat.clone();
        sort_by_expected_score(&mut p, &mut b);
        for k in 0..best_l {
            p_hat[k] += p[k] / folds as f64;
            for s in 0..N_SCORES {
                beta_hat[k][s] += b[k][s] / folds as f64;
            }
        }
    }
    // Renormalize away averaging round-off.
    let z: f64 = p_hat.iter().sum();
    for x in &mut p_hat {
        *x /= z;
    }
    for row in &mut beta_hat {
        let z: f64 = row.iter().sum();
        for x in row.iter_mut() {
            *x /= z;
        }
    }
    Ok(CvResult { best_l, scores, score_ses, p_hat, beta_hat })
}
