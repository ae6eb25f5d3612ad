use std::path::PathBuf;

use oam_core::spectrum::{scan_schmidt, OamWindow, ScanCell};
use serde::{Deserialize, Serialize};

use crate::config::{require_positive, Grid, OutputFormat, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};
use crate::output::{json_bytes, num, optional, write, CsvTable};

fn default_window() -> OamWindow {
    OamWindow::symmetric(50)
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ScanConfig {
    #[allow(dead_code)]
    pub schema_version: u32,
    pub a: Grid,
    pub gamma: Grid,
    pub eta: f64,
    #[serde(default = "default_window")]
    pub window: OamWindow,
    pub output_path: PathBuf,
    #[serde(default)]
    pub output_format: OutputFormat,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ScanFile<'a> {
    schema_version: u32,
    eta: f64,
    window: OamWindow,
    rows: &'a [ScanCell],
}

pub fn run(config: &ScanConfig) -> CliResult<()> {
    let a = config.a.values("a")?;
    let gamma = config.gamma.values("gamma")?;
    require_positive("eta", config.eta)?;
    if let Some(g) = gamma.iter().find(|g| !(**g > 0.0)) {
        return Err(CliError::config("gamma", format!("every gamma must be > 0, got {g}")));
    }
    let cells = scan_schmidt(&a, &gamma, config.eta, config.window);
    let bytes = match config.output_format {
        OutputFormat::Csv => {
            let mut table = CsvTable::new(&["a", "gamma", "K", "error"])?;
            table
                .meta("schemaVersion", SCHEMA_VERSION)
                .meta("eta", num(config.eta))
                .meta("window", format!("[{},{}]", config.window.min(), config.window.max()));
            for c in &cells {
                table.row([
                    num(c.a),
                    num(c.gamma),
                    optional(c.schmidt_number),
                    c.error.clone().unwrap_or_default(),
                ])?;
            }
            table.into_bytes()?
        }
        OutputFormat::Json => json_bytes(&ScanFile {
            schema_version: SCHEMA_VERSION,
            eta: config.eta,
            window: config.window,
            rows: &cells,
        })?,
    };
    write(&config.output_path, &bytes)
}
