//! Game-history ingestion: CSV parsing, rating-derived win probabilities,
//! and streak-window location.
//!
//! The on-disk format is UTF-8 CSV with the header
//! `index,player_rating,opponent_rating,result,timestamp`, results encoded
//! as `W`/`D`/`L` (case-insensitive). `player_rating` and `timestamp` may
//! be empty; a missing player rating falls back to the file-level default
//! supplied in [`IngestConfig`].

use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::elo::{win_probability, EloParams, RatingDelta};
use crate::error::{Error, Result};

const EXPECTED_HEADER: [&str; 5] = [
    "index",
    "player_rating",
    "opponent_rating",
    "result",
    "timestamp",
];

/// Outcome of one rated game, from the analyzed player's side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GameResult {
    Win,
    Draw,
    Loss,
}

impl GameResult {
    fn parse(token: &str) -> Option<Self> {
        match token.trim().to_ascii_uppercase().as_str() {
            "W" => Some(GameResult::Win),
            "D" => Some(GameResult::Draw),
            "L" => Some(GameResult::Loss),
            _ => None,
        }
    }
}

impl fmt::Display for GameResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let token = match self {
            GameResult::Win => "W",
            GameResult::Draw => "D",
            GameResult::Loss => "L",
        };
        f.write_str(token)
    }
}

/// How draws enter the win/no-win encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DrawPolicy {
    /// A draw is a played game that was not won (the default encoding:
    /// a 45 win + 1 draw stretch is 45 wins out of 46 games).
    #[default]
    DrawAsNoWin,
    /// Draws are removed from the analyzed sequence entirely, so the game
    /// count covers decisive games only.
    DrawExcluded,
}

impl DrawPolicy {
    /// Whether a record participates in the analyzed sequence.
    pub fn includes(&self, result: GameResult) -> bool {
        match self {
            DrawPolicy::DrawAsNoWin => true,
            DrawPolicy::DrawExcluded => result != GameResult::Draw,
        }
    }

    /// Parses the config/flag token.
    pub fn parse(token: &str) -> Option<Self> {
        match token.trim().to_ascii_lowercase().as_str() {
            "no-win" | "draw-as-no-win" => Some(DrawPolicy::DrawAsNoWin),
            "exclude" | "excluded" => Some(DrawPolicy::DrawExcluded),
            _ => None,
        }
    }
}

/// File-level loading options.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IngestConfig {
    /// Player rating used for rows whose `player_rating` column is empty.
    pub default_player_rating: Option<f64>,
    pub draw_policy: DrawPolicy,
}

/// One parsed game row.
#[derive(Debug, Clone, PartialEq)]
pub struct GameRecord {
    pub index: u64,
    /// Per-game player rating; `None` falls back to the file default.
    pub player_rating: Option<f64>,
    pub opponent_rating: f64,
    pub result: GameResult,
    /// Informational only; kept verbatim.
    pub timestamp: Option<String>,
}

/// An ordered, validated game history.
#[derive(Debug, Clone, PartialEq)]
pub struct GameHistory {
    records: Vec<GameRecord>,
    draw_policy: DrawPolicy,
    default_player_rating: Option<f64>,
}

/// A qualifying stretch found by [`find_streaks`]: `wins` wins inside the
/// `window` games starting at position `start` of the analyzed sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreakWindow {
    pub start: usize,
    pub window: usize,
    pub wins: usize,
}

impl GameHistory {
    pub fn records(&self) -> &[GameRecord] {
        &self.records
    }

    pub fn record_count(&self) -> usize {
        self.records.len()
    }

    pub fn draw_policy(&self) -> DrawPolicy {
        self.draw_policy
    }

    pub fn default_player_rating(&self) -> Option<f64> {
        self.default_player_rating
    }

    /// Positions (into `records`) of the games the draw policy keeps.
    pub fn analyzed_indices(&self) -> Vec<usize> {
        self.records
            .iter()
            .enumerate()
            .filter(|(_, r)| self.draw_policy.includes(r.result))
            .map(|(i, _)| i)
            .collect()
    }

    /// Win/no-win sequence after the draw policy is applied.
    pub fn outcomes(&self) -> Vec<bool> {
        self.records
            .iter()
            .filter(|r| self.draw_policy.includes(r.result))
            .map(|r| r.result == GameResult::Win)
            .collect()
    }

    /// Number of analyzed games under the draw policy.
    pub fn games(&self) -> usize {
        self.records
            .iter()
            .filter(|r| self.draw_policy.includes(r.result))
            .count()
    }

    /// Number of wins among the analyzed games.
    pub fn wins(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.result == GameResult::Win)
            .count()
    }

    /// Player rating for one record, falling back to the file default.
    pub fn player_rating(&self, record: &GameRecord) -> Option<f64> {
        record.player_rating.or(self.default_player_rating)
    }

    /// Canonical CSV serialization: same header and token set the loader
    /// accepts, so a load/serialize/load cycle is the identity on records.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("index,player_rating,opponent_rating,result,timestamp\n");
        for record in &self.records {
            let player = record.player_rating.map(format_rating).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                record.index,
                player,
                format_rating(record.opponent_rating),
                record.result,
                record.timestamp.as_deref().unwrap_or("")
            ));
        }
        out
    }
}

fn format_rating(rating: f64) -> String {
    // ratings are usually whole points; print them without a trailing .0
    if rating.fract() == 0.0 && rating.abs() < 1e15 {
        format!("{}", rating as i64)
    } else {
        format!("{rating}")
    }
}

/// Loads and validates a CSV game history from disk.
pub fn load_history(path: impl AsRef<Path>, config: &IngestConfig) -> Result<GameHistory> {
    let file = File::open(path.as_ref())?;
    load_history_from_reader(file, config)
}

/// As [`load_history`], from any reader.
pub fn load_history_from_reader<R: Read>(reader: R, config: &IngestConfig) -> Result<GameHistory> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = csv_reader
        .headers()
        .map_err(|e| Error::invalid(format!("cannot read CSV header: {e}")))?
        .clone();
    let header_fields: Vec<String> = headers
        .iter()
        .map(|h| h.trim().to_ascii_lowercase())
        .collect();
    if header_fields != EXPECTED_HEADER {
        return Err(Error::invalid(format!(
            "unexpected CSV header [{}]; expected [{}]",
            header_fields.join(","),
            EXPECTED_HEADER.join(",")
        )));
    }

    let mut records = Vec::new();
    for (i, row) in csv_reader.records().enumerate() {
        let row_number = i + 1;
        let row = row.map_err(|e| Error::CsvRow {
            row: row_number,
            column: "-".to_string(),
            message: format!("malformed CSV row: {e}"),
        })?;
        if row.len() != EXPECTED_HEADER.len() {
            return Err(Error::CsvRow {
                row: row_number,
                column: "-".to_string(),
                message: format!(
                    "expected {} fields, found {}",
                    EXPECTED_HEADER.len(),
                    row.len()
                ),
            });
        }
        records.push(parse_row(&row, row_number)?);
    }

    if records.is_empty() {
        return Err(Error::EmptyHistory);
    }

    // indices must be unique and contiguous so windows address real games
    for (pos, pair) in records.windows(2).enumerate() {
        if pair[1].index != pair[0].index + 1 {
            return Err(Error::CsvRow {
                row: pos + 2,
                column: "index".to_string(),
                message: format!(
                    "index {} does not follow {}; indices must be contiguous and increasing",
                    pair[1].index, pair[0].index
                ),
            });
        }
    }

    Ok(GameHistory {
        records,
        draw_policy: config.draw_policy,
        default_player_rating: config.default_player_rating,
    })
}

fn parse_row(row: &csv::StringRecord, row_number: usize) -> Result<GameRecord> {
    let field = |col: usize| row.get(col).unwrap_or("");
    let row_err = |column: &str, message: String| Error::CsvRow {
        row: row_number,
        column: column.to_string(),
        message,
    };

    let index: u64 = field(0).parse().map_err(|_| {
        row_err(
            "index",
            format!("'{}' is not a non-negative integer", field(0)),
        )
    })?;

    let player_rating = if field(1).is_empty() {
        None
    } else {
        let rating: f64 = field(1)
            .parse()
            .map_err(|_| row_err("player_rating", format!("'{}' is not a number", field(1))))?;
        validate_rating(rating).map_err(|m| row_err("player_rating", m))?;
        Some(rating)
    };

    let opponent_rating: f64 = field(2)
        .parse()
        .map_err(|_| row_err("opponent_rating", format!("'{}' is not a number", field(2))))?;
    validate_rating(opponent_rating).map_err(|m| row_err("opponent_rating", m))?;

    let result = GameResult::parse(field(3)).ok_or_else(|| {
        row_err(
            "result",
            format!(
                "unknown result token '{}'; accepted tokens: W, D, L",
                field(3)
            ),
        )
    })?;

    let timestamp = if field(4).is_empty() {
        None
    } else {
        Some(field(4).to_string())
    };

    Ok(GameRecord {
        index,
        player_rating,
        opponent_rating,
        result,
        timestamp,
    })
}

fn validate_rating(rating: f64) -> std::result::Result<(), String> {
    if !rating.is_finite() || rating <= 0.0 || rating >= 10_000.0 {
        return Err(format!("rating {rating} is outside (0, 10000)"));
    }
    Ok(())
}

/// Win probability for every record, in order, derived from the per-game
/// rating gap. Covers all records regardless of draw policy.
pub fn per_game_probabilities(history: &GameHistory, params: &EloParams) -> Result<Vec<f64>> {
    history
        .records()
        .iter()
        .map(|record| {
            let player = history.player_rating(record).ok_or_else(|| {
                Error::invalid(format!(
                    "game {} has no player rating and no file-level default was given",
                    record.index
                ))
            })?;
            let delta = RatingDelta::new(player - record.opponent_rating)?;
            Ok(win_probability(delta, params))
        })
        .collect()
}

/// Every window of `window` consecutive analyzed games holding at least
/// `min_wins` wins, ordered by start position.
pub fn find_streaks(
    history: &GameHistory,
    window: usize,
    min_wins: usize,
) -> Result<Vec<StreakWindow>> {
    let outcomes = history.outcomes();
    if outcomes.is_empty() {
        return Err(Error::EmptyHistory);
    }
    if window == 0 || window > outcomes.len() {
        return Err(Error::invalid(format!(
            "window must lie in 1..={}, got {window}",
            outcomes.len()
        )));
    }
    if min_wins > window {
        return Err(Error::invalid(format!(
            "cannot require {min_wins} wins from a window of {window} games"
        )));
    }

    let mut hits = Vec::new();
    let mut wins = outcomes[..window].iter().filter(|&&w| w).count();
    if wins >= min_wins {
        hits.push(StreakWindow {
            start: 0,
            window,
            wins,
        });
    }
    for start in 1..=outcomes.len() - window {
        wins -= usize::from(outcomes[start - 1]);
        wins += usize::from(outcomes[start + window - 1]);
        if wins >= min_wins {
            hits.push(StreakWindow {
                start,
                window,
                wins,
            });
        }
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(csv: &str, config: &IngestConfig) -> Result<GameHistory> {
        load_history_from_reader(csv.as_bytes(), config)
    }

    fn history_from_results(results: &str) -> GameHistory {
        let mut csv = String::from("index,player_rating,opponent_rating,result,timestamp\n");
        for (i, token) in results.chars().enumerate() {
            csv.push_str(&format!("{i},3300,2933,{token},\n"));
        }
        load(&csv, &IngestConfig::default()).unwrap()
    }

    #[test]
    fn loads_the_streak_shape() {
        // 45 wins and one draw is 45 wins out of 46 games under the default policy
        let mut results = "W".repeat(23);
        results.push('D');
        results.push_str(&"W".repeat(22));
        let history = history_from_results(&results);
        assert_eq!(history.record_count(), 46);
        assert_eq!(history.games(), 46);
        assert_eq!(history.wins(), 45);
    }

    #[test]
    fn draw_exclusion_shrinks_the_game_count() {
        let config = IngestConfig {
            draw_policy: DrawPolicy::DrawExcluded,
            ..IngestConfig::default()
        };
        let csv = "index,player_rating,opponent_rating,result,timestamp\n\
                   0,3300,2933,W,\n1,3300,2933,D,\n2,3300,2933,L,\n3,3300,2933,W,\n";
        let history = load(csv, &config).unwrap();
        assert_eq!(history.record_count(), 4);
        assert_eq!(history.games(), 3);
        assert_eq!(history.wins(), 2);
        assert_eq!(history.outcomes(), vec![true, false, true]);
        assert_eq!(history.analyzed_indices(), vec![0, 2, 3]);
    }

    #[test]
    fn empty_file_is_an_empty_history_error() {
        assert!(matches!(
            load("", &IngestConfig::default()),
            Err(Error::EmptyHistory) | Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn header_only_file_is_an_empty_history_error() {
        let csv = "index,player_rating,opponent_rating,result,timestamp\n";
        assert!(matches!(
            load(csv, &IngestConfig::default()),
            Err(Error::EmptyHistory)
        ));
    }

    #[test]
    fn wrong_header_is_rejected() {
        let csv = "game,player,opponent,result,when\n0,3300,2933,W,\n";
        let err = load(csv, &IngestConfig::default()).unwrap_err();
        assert!(err.to_string().contains("expected"));
    }

    #[test]
    fn malformed_rating_names_row_and_column() {
        let csv = "index,player_rating,opponent_rating,result,timestamp\n\
                   0,3300,2933,W,\n1,3300,not-a-number,W,\n";
        match load(csv, &IngestConfig::default()).unwrap_err() {
            Error::CsvRow { row, column, .. } => {
                assert_eq!(row, 2);
                assert_eq!(column, "opponent_rating");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unknown_result_token_lists_accepted_tokens() {
        let csv = "index,player_rating,opponent_rating,result,timestamp\n0,3300,2933,X,\n";
        let err = load(csv, &IngestConfig::default()).unwrap_err();
        assert!(err.to_string().contains("W, D, L"), "{err}");
    }

    #[test]
    fn out_of_range_rating_is_rejected() {
        let csv = "index,player_rating,opponent_rating,result,timestamp\n0,3300,-10,W,\n";
        assert!(load(csv, &IngestConfig::default()).is_err());
        let csv = "index,player_rating,opponent_rating,result,timestamp\n0,12000,2933,W,\n";
        assert!(load(csv, &IngestConfig::default()).is_err());
    }

    #[test]
    fn non_contiguous_indices_are_rejected() {
        let csv = "index,player_rating,opponent_rating,result,timestamp\n\
                   0,3300,2933,W,\n2,3300,2933,W,\n";
        match load(csv, &IngestConfig::default()).unwrap_err() {
            Error::CsvRow { row, column, .. } => {
                assert_eq!(row, 2);
                assert_eq!(column, "index");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn per_game_probabilities_from_constant_gap() {
        let mut csv = String::from("index,player_rating,opponent_rating,result,timestamp\n");
        for i in 0..5 {
            csv.push_str(&format!("{i},3300,2934,W,\n"));
        }
        let history = load(&csv, &IngestConfig::default()).unwrap();
        let probs = per_game_probabilities(&history, &EloParams::default()).unwrap();
        assert_eq!(probs.len(), 5);
        for q in probs {
            assert!((q - 0.8916).abs() < 0.0005);
        }
    }

    #[test]
    fn per_game_probabilities_landmarks() {
        let csv = "index,player_rating,opponent_rating,result,timestamp\n\
                   0,2600,2600,W,\n1,3000,2600,W,\n";
        let history = load(csv, &IngestConfig::default()).unwrap();
        let probs = per_game_probabilities(&history, &EloParams::default()).unwrap();
        assert!((probs[0] - 0.5).abs() < 1e-12);
        assert!((probs[1] - 10.0 / 11.0).abs() < 1e-12);
    }

    #[test]
    fn default_player_rating_fills_empty_cells() {
        let csv = "index,player_rating,opponent_rating,result,timestamp\n0,,2933,W,\n";
        let err = load(csv, &IngestConfig::default())
            .and_then(|h| per_game_probabilities(&h, &EloParams::default()))
            .unwrap_err();
        assert!(err.to_string().contains("game 0"), "{err}");

        let config = IngestConfig {
            default_player_rating: Some(3300.0),
            ..IngestConfig::default()
        };
        let history = load(csv, &config).unwrap();
        let probs = per_game_probabilities(&history, &EloParams::default()).unwrap();
        assert!(probs[0] > 0.5);
    }

    #[test]
    fn per_game_probabilities_reverse_with_the_history() {
        let csv = "index,player_rating,opponent_rating,result,timestamp\n\
                   0,3300,2800,W,\n1,3300,2900,W,\n2,3300,3000,L,\n";
        let history = load(csv, &IngestConfig::default()).unwrap();
        let forward = per_game_probabilities(&history, &EloParams::default()).unwrap();

        let mut reversed = history.clone();
        reversed.records.reverse();
        for (i, record) in reversed.records.iter_mut().enumerate() {
            record.index = i as u64;
        }
        let backward = per_game_probabilities(&reversed, &EloParams::default()).unwrap();

        let mut forward_reversed = forward.clone();
        forward_reversed.reverse();
        assert_eq!(backward, forward_reversed);
    }

    #[test]
    fn find_streaks_full_window() {
        let history = history_from_results("WWWWW");
        let hits = find_streaks(&history, 5, 5).unwrap();
        assert_eq!(
            hits,
            vec![StreakWindow {
                start: 0,
                window: 5,
                wins: 5
            }]
        );
    }

    #[test]
    fn find_streaks_reports_every_qualifying_window() {
        let history = history_from_results("WWLWW");
        let hits = find_streaks(&history, 2, 2).unwrap();
        let starts: Vec<usize> = hits.iter().map(|h| h.start).collect();
        assert_eq!(starts, vec![0, 3]);
    }

    #[test]
    fn find_streaks_zero_threshold_reports_everything() {
        let history = history_from_results("WLWLW");
        let hits = find_streaks(&history, 2, 0).unwrap();
        assert_eq!(hits.len(), 4);
    }

    #[test]
    fn find_streaks_infeasible_parameters() {
        let history = history_from_results("WLW");
        assert!(find_streaks(&history, 4, 1).is_err());
        assert!(find_streaks(&history, 0, 0).is_err());
        assert!(find_streaks(&history, 2, 3).is_err());
    }

    #[test]
    fn csv_round_trip_is_the_identity_on_records() {
        let csv = "index,player_rating,opponent_rating,result,timestamp\n\
                   3,3300,2933,W,2023-11-01T10:00:00Z\n\
                   4,,2901,d,\n\
                   5,3295.5,2950,L,2023-11-01T11:30:00Z\n";
        let config = IngestConfig {
            default_player_rating: Some(3300.0),
            ..IngestConfig::default()
        };
        let history = load(csv, &config).unwrap();
        let serialized = history.to_csv_string();
        let reloaded = load(&serialized, &config).unwrap();
        assert_eq!(history.records(), reloaded.records());
    }
}
