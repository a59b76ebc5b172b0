//! Subcommand implementations. Every reported number comes from a library
//! call; the compositions here (flag merging, history-to-observation
//! plumbing) are deliberately simple enough to re-derive in tests.

use std::fs;
use std::path::Path;

use serde::Serialize;

use streakweight::{
    binomial_pmf, binomial_tail_prob, end_to_end_case, find_streaks, implied_performance,
    load_history, mean_jensen_ratio, per_game_probabilities, poisson_binomial_prob, posterior,
    scan_streak_prob_mc, sensitivity_sweep, simulate_summary, CaseReport, DrawPolicy, EloParams,
    Error, GameHistory, IngestConfig, McEstimate, PriorSpec, RatingDelta, RatingInput, SimModel,
    StreakObservation, StreakWindow, TiltModel, WinModel,
};

use crate::config::FileConfig;
use crate::render;
use crate::svg;
use crate::{CommonArgs, EvidenceArgs, Format, ImpliedPerfArgs, ScanArgs, SimulateArgs, SweepArgs};

/// CLI-level error split by exit code: input problems exit 2, internal
/// numerical failures exit 3.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numerical(String),
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::Numerical(msg) => CliError::Numerical(msg),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

type CmdResult = Result<(), CliError>;

// ---------------------------------------------------------------------------
// evidence
// ---------------------------------------------------------------------------

pub fn run_evidence(args: EvidenceArgs) -> CmdResult {
    let cfg = FileConfig::load(args.common.config.as_deref())?;
    let format = resolve_format(&args.common, &cfg, &[Format::Text, Format::Json])?;
    let elo = resolve_elo(args.elo_base, args.elo_scale, &cfg)?;
    let uplift = resolve_uplift(args.uplift, &cfg)?;
    let prior_n = args
        .prior_n
        .or(cfg.f64("prior-n")?)
        .ok_or_else(|| input("--prior-n is required (innocent players per cheater)"))?;
    let p_guilt = args.p_guilt.or(cfg.f64("p-guilt")?).unwrap_or(1.0);
    let prior = PriorSpec::with_likelihood_under_guilt(prior_n, p_guilt)?;

    let report = if let Some(path) = &args.history {
        if args.delta.is_some()
            || args.opponent_avg.is_some()
            || args.games.is_some()
            || args.wins.is_some()
        {
            return Err(input(
                "--history conflicts with --delta/--opponent-avg/--games/--wins",
            ));
        }
        let history = load_history_with(path, args.player_rating, &args.draw_policy, &cfg)?;
        evidence_from_history(&history, args.per_game, uplift, &prior, &elo)?
    } else {
        if args.per_game {
            return Err(input("--per-game requires --history"));
        }
        let games = args.games.ok_or_else(|| input("--games is required"))?;
        let wins = args.wins.ok_or_else(|| input("--wins is required"))?;
        let rating = rating_input(args.delta, args.player_rating, args.opponent_avg)?;
        if uplift == 0.0 {
            end_to_end_case(rating, games, wins, &prior, &elo)?
        } else {
            let delta = RatingDelta::new(rating.delta())?;
            let q = apply_uplift(streakweight::win_probability(delta, &elo), uplift);
            let p = binomial_pmf(games, wins, q)?;
            let evidence = posterior(&prior, p)?;
            CaseReport {
                delta: delta.value(),
                win_odds: q / (1.0 - q),
                win_probability: q,
                games,
                wins,
                evidence,
            }
        }
    };

    match format {
        Format::Json => println!("{}", to_json(&report)?),
        _ => print_case_report(&report, args.common.precise),
    }
    Ok(())
}

/// Streak evidence from a loaded history. Uniform mode mirrors the
/// averaged-gap analysis (mean rating gap -> q -> binomial); per-game mode
/// keeps each game's own probability and uses the Poisson-binomial pmf.
fn evidence_from_history(
    history: &GameHistory,
    per_game: bool,
    uplift: f64,
    prior: &PriorSpec,
    elo: &EloParams,
) -> Result<CaseReport, CliError> {
    let games = u32::try_from(history.games())
        .map_err(|_| input("history has too many games to analyze"))?;
    let wins = history.wins() as u32;
    let mean_delta = mean_rating_delta(history)?;

    if per_game {
        let all_probs = per_game_probabilities(history, elo)?;
        let probs: Vec<f64> = history
            .analyzed_indices()
            .iter()
            .map(|&i| apply_uplift(all_probs[i], uplift))
            .collect();
        let mean_q = probs.iter().sum::<f64>() / probs.len() as f64;
        let obs = StreakObservation::new(games, wins, WinModel::PerGame { probs })?;
        let p = poisson_binomial_prob(&obs, wins)?;
        let evidence = posterior(prior, p)?;
        Ok(CaseReport {
            delta: mean_delta,
            win_odds: mean_q / (1.0 - mean_q),
            win_probability: mean_q,
            games,
            wins,
            evidence,
        })
    } else if uplift == 0.0 {
        Ok(end_to_end_case(
            RatingInput::Delta(mean_delta),
            games,
            wins,
            prior,
            elo,
        )?)
    } else {
        let delta = RatingDelta::new(mean_delta)?;
        let q = apply_uplift(streakweight::win_probability(delta, elo), uplift);
        let p = binomial_pmf(games, wins, q)?;
        let evidence = posterior(prior, p)?;
        Ok(CaseReport {
            delta: mean_delta,
            win_odds: q / (1.0 - q),
            win_probability: q,
            games,
            wins,
            evidence,
        })
    }
}

fn print_case_report(report: &CaseReport, precise: bool) {
    let v = |x: f64| render::value(x, precise);
    println!("games: {}, wins: {}", report.games, report.wins);
    println!("rating gap (delta): {}", v(report.delta));
    println!("win odds (w): {}", v(report.win_odds));
    println!("win probability (q): {}", v(report.win_probability));
    println!(
        "likelihood under innocence P(E|I): {}",
        v(report.evidence.likelihood_innocent)
    );
    println!(
        "bayes factor P(E|I)/P(E|G): {}",
        v(report.evidence.bayes_factor)
    );
    println!(
        "posterior odds of innocence: {}",
        v(report.evidence.posterior_odds_innocence)
    );
    println!("P(guilty | evidence): {}", v(report.evidence.p_guilty));
    println!("P(innocent | evidence): {}", v(report.evidence.p_innocent));
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

pub fn run_sweep(args: SweepArgs) -> CmdResult {
    let cfg = FileConfig::load(args.common.config.as_deref())?;
    let format = resolve_format(
        &args.common,
        &cfg,
        &[Format::Text, Format::Csv, Format::Json, Format::Svg],
    )?;
    let p = args
        .p
        .ok_or_else(|| input("--p is required (streak likelihood P(E|I))"))?;
    let n_from = args.n_from.ok_or_else(|| input("--n-from is required"))?;
    let n_to = args.n_to.ok_or_else(|| input("--n-to is required"))?;
    let step = args.step.ok_or_else(|| input("--step is required"))?;
    if !step.is_finite() || step <= 0.0 {
        return Err(input(format!("--step must be > 0, got {step}")));
    }
    if n_from > n_to {
        return Err(input(format!("--n-from {n_from} exceeds --n-to {n_to}")));
    }

    // build the grid by index so step accumulation cannot drift
    let count = ((n_to - n_from) / step + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (0..count).map(|i| n_from + i as f64 * step).collect();
    let rows = sensitivity_sweep(p, &grid)?;

    let content = match format {
        Format::Text => {
            let mut out = String::from("prior N    P(innocent | evidence)\n");
            for row in &rows {
                out.push_str(&format!(
                    "{:<10} {}\n",
                    render::value(row.prior_n, args.common.precise),
                    render::value(row.p_innocent, args.common.precise)
                ));
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("prior_n,p_innocent\n");
            for row in &rows {
                out.push_str(&format!("{},{}\n", row.prior_n, row.p_innocent));
            }
            out
        }
        Format::Json => format!("{}\n", to_json(&rows)?),
        Format::Svg => {
            let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.prior_n, r.p_innocent)).collect();
            svg::line_chart(
                &points,
                &format!("Posterior innocence vs prior odds (P(E|I) = {p})"),
                "prior odds N (innocent players per cheater)",
                "P(innocent | evidence)",
            )
        }
    };
    write_output(args.output.as_deref(), &content)
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct ScanOutput {
    analyzed_games: usize,
    window: usize,
    min_wins: usize,
    /// Win probability the single-window tail is evaluated at: the
    /// uniform override when given, otherwise the mean per-game value.
    reference_q: f64,
    windows: Vec<StreakWindow>,
    /// Likelihood of this window: P(>= min_wins wins) for one fixed window.
    single_window_tail: f64,
    /// Chance of some such window anywhere in the history.
    scan_estimate: McEstimate,
}

pub fn run_scan(args: ScanArgs) -> CmdResult {
    let cfg = FileConfig::load(args.common.config.as_deref())?;
    let format = resolve_format(&args.common, &cfg, &[Format::Text, Format::Json])?;
    let elo = resolve_elo(args.elo_base, args.elo_scale, &cfg)?;
    let uplift = resolve_uplift(args.uplift, &cfg)?;
    let trials = args.trials.or(cfg.u64("trials")?).unwrap_or(10_000);
    let seed = args.seed.or(cfg.u64("seed")?).ok_or_else(|| {
        input("--seed is required: stochastic commands have no wall-clock default")
    })?;

    let history = load_history_with(&args.history, args.player_rating, &args.draw_policy, &cfg)?;
    let windows = find_streaks(&history, args.window, args.min_wins)?;
    let n = history.games();

    let (model, reference_q) = match args.q {
        Some(q) => {
            let q = apply_uplift(q, uplift);
            (WinModel::Uniform { q }, q)
        }
        None => {
            let all_probs = per_game_probabilities(&history, &elo)?;
            let probs: Vec<f64> = history
                .analyzed_indices()
                .iter()
                .map(|&i| apply_uplift(all_probs[i], uplift))
                .collect();
            let mean_q = probs.iter().sum::<f64>() / probs.len() as f64;
            (WinModel::PerGame { probs }, mean_q)
        }
    };
    let model = match args.tilt {
        Some(penalty) => SimModel::Tilt(TiltModel::new(reference_q, penalty)?),
        None => SimModel::Independent(model),
    };

    let single_window_tail =
        binomial_tail_prob(args.window as u32, args.min_wins as u32, reference_q)?;
    let scan_estimate = scan_streak_prob_mc(n, &model, args.window, args.min_wins, trials, seed)?;

    let output = ScanOutput {
        analyzed_games: n,
        window: args.window,
        min_wins: args.min_wins,
        reference_q,
        windows,
        single_window_tail,
        scan_estimate,
    };

    match format {
        Format::Json => println!("{}", to_json(&output)?),
        _ => print_scan(&output, seed, args.common.precise),
    }
    Ok(())
}

fn print_scan(out: &ScanOutput, seed: u64, precise: bool) {
    let v = |x: f64| render::value(x, precise);
    println!(
        "analyzed games: {}, window: {}, min wins: {}",
        out.analyzed_games, out.window, out.min_wins
    );
    println!(
        "qualifying windows (>= {} wins in {} games): {}",
        out.min_wins,
        out.window,
        out.windows.len()
    );
    const MAX_LISTED: usize = 20;
    for hit in out.windows.iter().take(MAX_LISTED) {
        println!("  start {}: {} wins", hit.start, hit.wins);
    }
    if out.windows.len() > MAX_LISTED {
        println!("  ... and {} more", out.windows.len() - MAX_LISTED);
    }
    println!(
        "likelihood of this window: P(>= {} wins in one fixed {}-game window at q = {}) = {}",
        out.min_wins,
        out.window,
        v(out.reference_q),
        v(out.single_window_tail)
    );
    println!(
        "chance of some such window anywhere: {} +/- {} (SE; {} trials, seed {})",
        v(out.scan_estimate.estimate),
        v(out.scan_estimate.std_error),
        out.scan_estimate.trials,
        seed
    );
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

pub fn run_simulate(args: SimulateArgs) -> CmdResult {
    let cfg = FileConfig::load(args.common.config.as_deref())?;
    let format = resolve_format(&args.common, &cfg, &[Format::Text, Format::Json])?;
    let seed = args.seed.or(cfg.u64("seed")?).ok_or_else(|| {
        input("--seed is required: stochastic commands have no wall-clock default")
    })?;
    let games = args.games.ok_or_else(|| input("--games is required"))?;
    let reps = args.reps.ok_or_else(|| input("--reps is required"))?;

    if args.jensen {
        let low = args.low.ok_or_else(|| input("--jensen requires --low"))?;
        let high = args.high.ok_or_else(|| input("--jensen requires --high"))?;
        let exp = mean_jensen_ratio(low, high, games, reps, seed)?;
        match format {
            Format::Json => println!("{}", to_json(&exp)?),
            _ => {
                let v = |x: f64| render::value(x, args.common.precise);
                println!(
                    "jensen ratio experiment: q_i ~ U({low}, {high}), {games} games, {reps} replications, seed {seed}"
                );
                println!(
                    "mean ratio (prod q_i) / mean(q)^m: {} +/- {} (SE)",
                    v(exp.mean_ratio),
                    v(exp.std_error)
                );
            }
        }
        return Ok(());
    }

    if args.low.is_some() || args.high.is_some() {
        return Err(input("--low/--high only apply with --jensen"));
    }
    let q = args
        .q
        .ok_or_else(|| input("--q is required for game simulation"))?;
    let model = match args.tilt {
        Some(penalty) => SimModel::Tilt(TiltModel::new(q, penalty)?),
        None => SimModel::Independent(WinModel::Uniform { q }),
    };
    let summary = simulate_summary(games, reps, &model, seed)?;
    match format {
        Format::Json => println!("{}", to_json(&summary)?),
        _ => {
            let v = |x: f64| render::value(x, args.common.precise);
            println!(
                "simulated {} replications of {} games (seed {seed}, model: {})",
                summary.reps,
                summary.games_per_rep,
                match args.tilt {
                    Some(penalty) => format!("tilt penalty {penalty} at q = {q}"),
                    None => format!("independent games at q = {q}"),
                }
            );
            println!(
                "empirical win rate: {} +/- {} (SE)",
                v(summary.win_rate),
                v(summary.win_rate_std_error)
            );
            println!("longest win run observed: {}", summary.longest_run);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// implied-perf
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct ImpliedPerfOutput {
    score_fraction: f64,
    opponent_avg: f64,
    performance: f64,
}

pub fn run_implied_perf(args: ImpliedPerfArgs) -> CmdResult {
    let cfg = FileConfig::load(args.common.config.as_deref())?;
    let format = resolve_format(&args.common, &cfg, &[Format::Text, Format::Json])?;
    let elo = resolve_elo(args.elo_base, args.elo_scale, &cfg)?;

    let score_fraction = match (args.score, args.wins, args.games) {
        (Some(score), None, None) => score,
        (None, Some(wins), Some(games)) => {
            if games <= 0.0 {
                return Err(input("--games must be > 0"));
            }
            wins / games
        }
        (None, None, None) => return Err(input("provide --score or the pair --wins/--games")),
        _ => {
            return Err(input(
                "provide either --score or the pair --wins/--games, not both",
            ))
        }
    };
    let opponent_avg = args
        .opponent_avg
        .ok_or_else(|| input("--opponent-avg is required"))?;
    let performance = implied_performance(score_fraction, opponent_avg, &elo)?;

    let output = ImpliedPerfOutput {
        score_fraction,
        opponent_avg,
        performance,
    };
    match format {
        Format::Json => println!("{}", to_json(&output)?),
        _ => println!(
            "implied performance rating: {} (score {} vs {} average opposition)",
            render::value(output.performance, args.common.precise),
            render::value(output.score_fraction, args.common.precise),
            render::value(output.opponent_avg, args.common.precise)
        ),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

fn resolve_format(
    common: &CommonArgs,
    cfg: &FileConfig,
    allowed: &[Format],
) -> Result<Format, CliError> {
    let format = match common.format {
        Some(f) => f,
        None => match cfg.string("format") {
            Some(raw) => parse_format(&raw)?,
            None => Format::Text,
        },
    };
    if !allowed.contains(&format) {
        return Err(input(format!(
            "format {format:?} does not apply here; allowed: {allowed:?}"
        )));
    }
    Ok(format)
}

fn parse_format(raw: &str) -> Result<Format, CliError> {
    match raw.trim().to_ascii_lowercase().as_str() {
        "text" => Ok(Format::Text),
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        "svg" | "svg-plot" => Ok(Format::Svg),
        other => Err(input(format!(
            "unknown format '{other}'; expected text, csv, json or svg"
        ))),
    }
}

fn resolve_elo(
    base: Option<f64>,
    scale: Option<f64>,
    cfg: &FileConfig,
) -> Result<EloParams, CliError> {
    let base = base.or(cfg.f64("elo-base")?).unwrap_or(10.0);
    let scale = scale.or(cfg.f64("elo-scale")?).unwrap_or(400.0);
    Ok(EloParams::new(base, scale)?)
}

fn resolve_uplift(flag: Option<f64>, cfg: &FileConfig) -> Result<f64, CliError> {
    let uplift = flag.or(cfg.f64("uplift")?).unwrap_or(0.0);
    if !uplift.is_finite() || !(0.0..1.0).contains(&uplift) {
        return Err(input(format!(
            "time-forfeit uplift must lie in [0, 1), got {uplift}"
        )));
    }
    Ok(uplift)
}

/// Extra win probability from non-board wins: q' = q + u(1 - q).
fn apply_uplift(q: f64, uplift: f64) -> f64 {
    if uplift == 0.0 {
        q
    } else {
        q + uplift * (1.0 - q)
    }
}

fn resolve_draw_policy(flag: &Option<String>, cfg: &FileConfig) -> Result<DrawPolicy, CliError> {
    let raw = flag.clone().or(cfg.string("draw-policy"));
    match raw {
        None => Ok(DrawPolicy::default()),
        Some(token) => DrawPolicy::parse(&token).ok_or_else(|| {
            input(format!(
                "unknown draw policy '{token}'; expected no-win or exclude"
            ))
        }),
    }
}

fn load_history_with(
    path: &Path,
    player_rating: Option<f64>,
    draw_policy: &Option<String>,
    cfg: &FileConfig,
) -> Result<GameHistory, CliError> {
    let config = IngestConfig {
        default_player_rating: player_rating.or(cfg.f64("player-rating")?),
        draw_policy: resolve_draw_policy(draw_policy, cfg)?,
    };
    Ok(load_history(path, &config)?)
}

fn rating_input(
    delta: Option<f64>,
    player: Option<f64>,
    opponent_avg: Option<f64>,
) -> Result<RatingInput, CliError> {
    match (delta, player, opponent_avg) {
        (Some(d), None, None) => Ok(RatingInput::Delta(d)),
        (None, Some(player), Some(opponent_avg)) => Ok(RatingInput::Ratings {
            player,
            opponent_avg,
        }),
        (Some(_), _, _) => Err(input(
            "--delta conflicts with --player-rating/--opponent-avg",
        )),
        _ => Err(input(
            "provide --delta or both --player-rating and --opponent-avg",
        )),
    }
}

/// Mean rating gap over the analyzed games.
fn mean_rating_delta(history: &GameHistory) -> Result<f64, CliError> {
    let indices = history.analyzed_indices();
    if indices.is_empty() {
        return Err(input(
            "history has no analyzable games under this draw policy",
        ));
    }
    let mut sum = 0.0;
    for &i in &indices {
        let record = &history.records()[i];
        let player = history.player_rating(record).ok_or_else(|| {
            input(format!(
                "game {} has no player rating and no file-level default was given",
                record.index
            ))
        })?;
        sum += player - record.opponent_rating;
    }
    Ok(sum / indices.len() as f64)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numerical(format!("JSON serialization failed: {e}")))
}

fn write_output(path: Option<&Path>, content: &str) -> CmdResult {
    match path {
        Some(path) => fs::write(path, content)
            .map_err(|e| input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
