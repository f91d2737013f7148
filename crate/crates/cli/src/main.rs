//! `reviewsim`: sweeps, simulations, memory-policy search, and parameter
//! learning for the conference review market model.
//!
//! Exit codes: 0 on success, 1 on configuration or input errors, 2 on
//! numerical divergence (e.g. requesting conference quality under a Cauchy
//! prior).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use reviewsim_core::abm::memory::{
    pareto_structure, policy_search_memory, MemoryFamily, MemorySearchConfig,
};
use reviewsim_core::abm::{simulate, SimConfig};
use reviewsim_core::analytics::{de_facto_threshold, DeFactoKind};
use reviewsim_core::config::{apply_author_lambda, apply_review_lambda, ConfigFile, StrategyKind};
use reviewsim_core::csvio::{self, fmt_sig12};
use reviewsim_core::error::Error;
use reviewsim_core::learn::{
    cross_validate, ingest_reviews, preset_text, quality_values, EmOptions, LearnedModel,
};
use reviewsim_core::mlr::{check_mlr, MlrResult};
use reviewsim_core::model::{AlphaSpec, AuthorSignal};
use reviewsim_core::sweep::{pareto_filter, qb_sweep_capped, tau_grid_over};
use reviewsim_core::{blackwell, mix_with_uniform};

#[derive(Parser)]
#[command(name = "reviewsim", version, about, max_term_width = 100)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on this.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct ModelArgs {
    /// Model configuration file (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Bundled preset name (overrides the config's preset field).
    #[arg(long)]
    preset: Option<String>,
    /// Reviews per round (overrides the config).
    #[arg(long)]
    m: Option<usize>,
    /// Reviewer signal quality: mixes the confusion matrix toward uniform.
    #[arg(long, value_name = "LAMBDA")]
    lambda_r: Option<f64>,
    /// Author signal quality: mixes the author matrix toward uniform.
    #[arg(long, value_name = "LAMBDA")]
    lambda_a: Option<f64>,
    /// Conference value V (overrides the config).
    #[arg(long)]
    v: Option<f64>,
    /// Author discount factor eta (overrides the config).
    #[arg(long)]
    eta: Option<f64>,
}

#[derive(Args, Clone)]
struct OutArg {
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep acceptance thresholds and emit the quality/burden tradeoff CSV.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutArg,
        /// Number of grid points.
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[arg(long, allow_negative_numbers = true)]
        tau_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        tau_max: Option<f64>,
        /// Cap on submissions per paper (time-limited policies).
        #[arg(long, value_name = "T")]
        t: Option<usize>,
    },
    /// Recompute Pareto flags over an existing sweep CSV and keep the frontier.
    Pareto {
        /// Input CSV produced by `sweep`.
        input: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the agent-based simulation and emit per-round counts.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutArg,
        /// Papers to simulate (overrides the config).
        #[arg(long)]
        n: Option<usize>,
        /// Rounds before the forced sure bet (overrides the config).
        #[arg(long, value_name = "T")]
        t: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Author strategy.
        #[arg(long, value_parser = ["myopic", "dp"])]
        strategy: Option<String>,
    },
    /// Search time-limited policy families over per-round threshold vectors.
    MemorySearch {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutArg,
        /// Candidate thresholds per enumerated round.
        #[arg(long, default_value_t = 40)]
        grid: usize,
        /// Total rounds before the forced sure bet.
        #[arg(long, value_name = "T", default_value_t = 5)]
        t: usize,
        /// Rounds with enumerated thresholds; the rest follow the fixed
        /// two-of-three rule.
        #[arg(long, default_value_t = 3)]
        enumerate: usize,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Families to search.
        #[arg(long, value_parser = ["fixed", "round", "following", "all"], default_value = "all")]
        policy: String,
        /// Apply the tail rule to the cumulative posterior instead of the
        /// newest reviews (review-following candidates only).
        #[arg(long)]
        cumulative_tail: bool,
    },
    /// Fit the categorical model to review scores (newline-delimited JSON
    /// records {"paper_id", "rating"}).
    Learn {
        /// Input records; use '-' for stdin.
        input: PathBuf,
        #[command(flatten)]
        out: OutArg,
        #[arg(long, default_value_t = 2)]
        l_min: usize,
        #[arg(long, default_value_t = 10)]
        l_max: usize,
        #[arg(long, default_value_t = 5)]
        folds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        iterations: usize,
    },
    /// Print a bundled preset.
    Preset {
        /// One of: ICLR2020-L4, ICLR2020-L5, ICLR2021-L4, ICLR2021-L5.
        name: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Validate a model configuration and report signal-quality checks.
    Check {
        #[command(flatten)]
        model: ModelArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("reviewsim: --jobs: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("reviewsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load_model(args: &ModelArgs) -> Result<reviewsim_core::config::Resolved, Error> {
    let mut cfg = match &args.config {
        Some(path) => ConfigFile::from_path(path)?,
        None => ConfigFile::default(),
    };
    if let Some(name) = &args.preset {
        cfg.preset = Some(name.clone());
    }
    if let Some(m) = args.m {
        cfg.m = Some(m);
    }
    let mut resolved = cfg.resolve()?;
    if let Some(v) = args.v {
        resolved.setting.author.value = v;
    }
    if let Some(eta) = args.eta {
        resolved.setting.author.discount = eta;
    }
    if let Some(lambda) = args.lambda_r {
        resolved.setting.review = apply_review_lambda(&resolved.setting.review, lambda)?;
    }
    if let Some(lambda) = args.lambda_a {
        // Resolve a shared author matrix before mixing.
        if matches!(
            resolved.setting.author.signal,
            AuthorSignal::Noisy(AlphaSpec::SameAsReview)
        ) {
            let alpha = resolved
                .setting
                .author_confusion()?
                .expect("noisy author has a matrix");
            resolved.setting.author.signal = AuthorSignal::Noisy(AlphaSpec::Matrix(alpha));
        }
        resolved.setting.author = apply_author_lambda(&resolved.setting.author, lambda)?;
    }
    resolved.setting.validate()?;
    Ok(resolved)
}

fn open_out(out: &OutArg) -> Result<Box<dyn Write>, Error> {
    Ok(match &out.out {
        Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Sweep { model, out, grid, tau_min, tau_max, t } => {
            let resolved = load_model(&model)?;
            let setting = &resolved.setting;
            let taus = match (tau_min, tau_max) {
                (Some(lo), Some(hi)) => tau_grid_over(setting, lo, hi, grid),
                (None, None) => reviewsim_core::sweep::default_tau_grid(setting, grid)?,
                _ => {
                    return Err(Error::Config(
                        "tau-min/tau-max: provide both bounds or neither".into(),
                    ))
                }
            };
            let points = qb_sweep_capped(setting, &taus, resolved.tie, t)?;
            csvio::write_qb_points(open_out(&out)?, &points)
        }
        Command::Pareto { input, out } => {
            let text = std::fs::read(&input)?;
            let mut points = csvio::read_qb_points(std::io::BufReader::new(&text[..]))?;
            pareto_filter(&mut points);
            points.retain(|p| p.pareto);
            csvio::write_qb_points(open_out(&out)?, &points)
        }
        Command::Simulate { model, out, n, t, seed, strategy } => {
            let resolved = load_model(&model)?;
            let policy = resolved
                .policy
                .clone()
                .ok_or_else(|| Error::Config("policy: missing [policy] section".into()))?;
            let strategy = match strategy.as_deref() {
                Some("dp") => StrategyKind::OptimalDp,
                Some("myopic") => StrategyKind::Myopic,
                _ => resolved.sim.strategy,
            };
            let cfg = SimConfig {
                setting: resolved.setting.clone(),
                policy,
                n: n.unwrap_or(resolved.sim.n),
                rounds: t.unwrap_or(resolved.sim.rounds),
                seed: seed.unwrap_or(resolved.sim.seed),
                strategy,
                tie: resolved.tie,
            };
            let metrics = simulate(&cfg)?;
            let mut w = open_out(&out)?;
            writeln!(
                w,
                "# n={} T={} seed={} quality={} burden={} acc_rate={} quality_se={} burden_se={} acc_rate_se={}",
                metrics.n,
                cfg.rounds,
                cfg.seed,
                fmt_sig12(metrics.quality),
                fmt_sig12(metrics.burden),
                fmt_sig12(metrics.acc_rate),
                fmt_sig12(metrics.quality_se),
                fmt_sig12(metrics.burden_se),
                fmt_sig12(metrics.acc_rate_se),
            )?;
            writeln!(w, "round,submitted,accepted,reviews,quality_contrib")?;
            for r in &metrics.per_round {
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    r.round,
                    r.submitted,
                    r.accepted,
                    r.reviews,
                    fmt_sig12(r.quality_contrib)
                )?;
            }
            Ok(())
        }
        Command::MemorySearch {
            model,
            out,
            grid,
            t,
            enumerate,
            n,
            seed,
            policy,
            cumulative_tail,
        } => {
            let resolved = load_model(&model)?;
            let candidates: Vec<f64> = (0..grid.max(2))
                .map(|i| -1.0 + i as f64 * (1.95 / (grid.max(2) - 1) as f64))
                .collect();
            let cfg = MemorySearchConfig {
                setting: resolved.setting.clone(),
                candidates,
                enumerated: enumerate,
                total_rounds: t,
                n,
                seed,
                tail_two_of_three_per_round: !cumulative_tail,
                tie: resolved.tie,
            };
            let families: Vec<MemoryFamily> = match policy.as_str() {
                "fixed" => vec![MemoryFamily::Fixed],
                "round" => vec![MemoryFamily::RoundDependent],
                "following" => vec![MemoryFamily::ReviewFollowing],
                _ => vec![
                    MemoryFamily::Fixed,
                    MemoryFamily::RoundDependent,
                    MemoryFamily::ReviewFollowing,
                ],
            };
            let mut w = open_out(&out)?;
            writeln!(w, "family,taus,quality,burden,acc_rate,pareto")?;
            for family in families {
                let candidates = policy_search_memory(&cfg, family)?;
                if let Some((best, median_last)) = pareto_structure(&candidates) {
                    eprintln!(
                        "{family:?}: best-quality vector {best:?}, median last-round threshold {}",
                        fmt_sig12(median_last)
                    );
                }
                for c in candidates {
                    writeln!(
                        w,
                        "{:?},{},{},{},{},{}",
                        c.family,
                        c.taus.iter().map(|x| fmt_sig12(*x)).collect::<Vec<_>>().join(";"),
                        fmt_sig12(c.quality),
                        fmt_sig12(c.burden),
                        fmt_sig12(c.acc_rate),
                        c.pareto
                    )?;
                }
            }
            Ok(())
        }
        Command::Learn { input, out, l_min, l_max, folds, seed, iterations } => {
            let data = if input.as_os_str() == "-" {
                ingest_reviews(std::io::stdin().lock(), "stdin")?
            } else {
                let file = std::fs::File::open(&input)?;
                ingest_reviews(std::io::BufReader::new(file), &input.display().to_string())?
            };
            eprintln!("{} papers ingested from {}", data.len(), data.source);
            let opts = EmOptions { iterations, ..EmOptions::default() };
            let cv = cross_validate(&data, l_min..=l_max, folds, seed, opts)?;
            for (l, score) in &cv.scores {
                eprintln!("L={l}: held-out loglik {score:.3}");
            }
            let q = quality_values(&data.papers, &cv.p_hat, &cv.beta_hat)?;
            let best_score = cv
                .scores
                .iter()
                .find(|(l, _)| *l == cv.best_l)
                .map(|(_, s)| *s)
                .unwrap_or(f64::NAN);
            let model = LearnedModel {
                l: cv.best_l,
                p_hat: cv.p_hat.clone(),
                beta_hat: cv.beta_hat.clone(),
                q_values: q,
                test_loglik: best_score,
            };
            eprintln!("selected L = {}", model.l);
            let mut w = open_out(&out)?;
            write!(w, "{}", model.to_config_toml())?;
            Ok(())
        }
        Command::Preset { name, out } => {
            let text = preset_text(&name)?;
            let mut w = open_out(&out)?;
            write!(w, "{text}")?;
            Ok(())
        }
        Command::Check { model } => {
            let resolved = load_model(&model)?;
            let setting = &resolved.setting;
            println!("config: valid");
            println!("rho = {} (1/rho = {})", fmt_sig12(setting.rho()), fmt_sig12(1.0 / setting.rho()));
            if let Some((_, confusion)) = setting.review.categorical_view() {
                match check_mlr(&confusion) {
                    MlrResult::Informative => println!("reviewer signal: informative (strict MLR)"),
                    MlrResult::NotFullSupport { quality, signal } => println!(
                        "reviewer signal: not full support (zero entry at quality {quality}, score {signal})"
                    ),
                    MlrResult::Violation { qualities, signals } => println!(
                        "reviewer signal: MLR violation at qualities {qualities:?}, scores {signals:?}"
                    ),
                }
                // Self-dominance and dominance over a uniform-mixed copy.
                let selfdom = blackwell::check_blackwell(&confusion, &confusion)?;
                println!("blackwell self-dominance: {}", if selfdom.is_some() { "ok" } else { "FAILED" });
                let mixed = mix_with_uniform(&confusion, 0.5)?;
                let mixdom = blackwell::check_blackwell(&confusion, &mixed)?;
                println!(
                    "blackwell dominance over lambda=0.5 mixture: {}",
                    if mixdom.is_some() { "ok" } else { "FAILED" }
                );
            } else {
                println!("reviewer signal: continuous additive noise (MLR holds by construction)");
            }
            if let Some(policy) = &resolved.policy {
                let df = de_facto_threshold(setting, policy, resolved.tie)?;
                match df.kind {
                    DeFactoKind::AllSubmitted => println!("de facto threshold: -inf (all submitted)"),
                    DeFactoKind::NoneSubmitted => println!("de facto threshold: +inf (none submitted)"),
                    DeFactoKind::Boundary { below, above, indifferent } => println!(
                        "de facto threshold: {} (boundary ({}, {}), indifferent: {:?})",
                        fmt_sig12(below),
                        fmt_sig12(below),
                        fmt_sig12(above),
                        indifferent
                    ),
                    DeFactoKind::Root { theta } => {
                        println!("de facto threshold: {}", fmt_sig12(theta))
                    }
                }
            }
            Ok(())
        }
    }
}
