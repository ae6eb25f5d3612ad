use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Command-line values that replace top-level fields of the config document.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub seed: Option<u64>,
}

impl Overrides {
    fn apply(&self, doc: &mut Value) -> CliResult<()> {
        let Value::Object(map) = doc else {
            return Err(CliError::config("", "config must be a JSON object"));
        };
        if let Some(out) = &self.out {
            map.insert("outputPath".into(), Value::String(out.to_string_lossy().into_owned()));
        }
        if let Some(format) = self.format {
            map.insert("outputFormat".into(), serde_json::to_value(format).expect("enum serializes"));
        }
        if let Some(seed) = self.seed {
            map.insert("seed".into(), Value::from(seed));
        }
        Ok(())
    }
}

/// Reads `path`, applies the overrides and deserializes, reporting the JSON
/// path of the first offending field.
pub fn load<T: DeserializeOwned>(path: &Path, overrides: &Overrides) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config("--config", format!("cannot read {}: {e}", path.display())))?;
    parse(&text, overrides)
}

pub fn parse<T: DeserializeOwned>(text: &str, overrides: &Overrides) -> CliResult<T> {
    let mut doc: Value = serde_json::from_str(text).map_err(|e| CliError::config("", format!("malformed JSON: {e}")))?;
    overrides.apply(&mut doc)?;
    let version = doc.get("schemaVersion").cloned();
    match version {
        Some(Value::Number(n)) if n.as_u64() == Some(SCHEMA_VERSION as u64) => {}
        Some(other) => {
            return Err(CliError::config(
                "schemaVersion",
                format!("unsupported schema version {other}, expected {SCHEMA_VERSION}"),
            ))
        }
        None => return Err(CliError::config("schemaVersion", "missing field `schemaVersion`")),
    }
    serde_path_to_error::deserialize(doc).map_err(|e| {
        let path = e.path().to_string();
        CliError::config(if path == "." { String::new() } else { path }, e.into_inner())
    })
}

/// Parses `a` values given either as an explicit list or as an inclusive
/// `{start, stop, step}` range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl Grid {
    pub fn values(&self, field: &str) -> CliResult<Vec<f64>> {
        let values = match *self {
            Grid::Values(ref v) => v.clone(),
            Grid::Range { start, stop, step } => {
                if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
                    return Err(CliError::config(
                        field,
                        format!("range needs finite start <= stop and step > 0, got {start}..{stop} by {step}"),
                    ));
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
                if n > 1_000_000 {
                    return Err(CliError::config(field, format!("range has {n} points, limit is 1000000")));
                }
                // Snap to 12 decimals so 0.1 + 0.2 style drift does not reach the output.
                (0..n)
                    .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
                    .collect()
            }
        };
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(CliError::config(field, "grid must be non-empty and finite"));
        }
        Ok(values)
    }
}

pub fn require_positive(field: &str, value: f64) -> CliResult<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must be finite and > 0, got {value}")))
    }
}
