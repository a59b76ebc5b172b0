//! Optional key=value config file. Flags always win; the file only fills
//! in values the command line left out.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::commands::CliError;

/// Keys the config file may carry. Anything else is rejected so typos do
/// not silently change an analysis.
const KNOWN_KEYS: [&str; 10] = [
    "prior-n",
    "p-guilt",
    "elo-base",
    "elo-scale",
    "draw-policy",
    "uplift",
    "seed",
    "trials",
    "format",
    "player-rating",
];

#[derive(Debug, Default)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (line_number, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Input(format!(
                    "config line {} is not key=value: '{line}'",
                    line_number + 1
                )));
            };
            let key = key.trim().to_ascii_lowercase();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Input(format!(
                    "unknown config key '{key}' on line {}; known keys: {}",
                    line_number + 1,
                    KNOWN_KEYS.join(", ")
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn string(&self, key: &str) -> Option<String> {
        self.values.get(key).cloned()
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.parse(key)
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>, CliError> {
        self.parse(key)
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|_| {
                CliError::Input(format!("config key '{key}' has unparsable value '{raw}'"))
            }),
        }
    }
}
