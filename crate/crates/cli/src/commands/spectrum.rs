use std::path::PathBuf;

use oam_core::spectrum::{engine_by_name, schmidt_number, OamWindow, PumpSpec, SetupParams, SpiralSpectrum};
use serde::{Deserialize, Serialize};

use crate::config::{OutputFormat, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};
use crate::output::{json_bytes, num, optional, write, CsvTable};

fn default_window() -> OamWindow {
    OamWindow::symmetric(12)
}

/// Setup, pump and engine selection shared by every command that needs a spectrum.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SpectrumBlock {
    pub setup: SetupParams,
    pub pump: PumpSpec,
    #[serde(default = "default_window")]
    pub window: OamWindow,
    /// `closed-form` or `quadrature`; defaults to the closed form when the pump has one.
    #[serde(default)]
    pub engine: Option<String>,
}

impl SpectrumBlock {
    /// Builds the pump and engine up front so bad names fail as config errors.
    pub fn compute(&self, prefix: &str) -> CliResult<SpiralSpectrum> {
        let pump = self.pump.build().map_err(|e| CliError::config(format!("{prefix}pump"), e))?;
        let name = match &self.engine {
            Some(name) => name.as_str(),
            None if pump.closed_form().is_some() => "closed-form",
            None => "quadrature",
        };
        let engine = engine_by_name(name).map_err(|e| CliError::config(format!("{prefix}engine"), e))?;
        Ok(engine.spectrum(pump.as_ref(), &self.setup, self.window)?)
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SpectrumConfig {
    #[allow(dead_code)]
    pub schema_version: u32,
    pub setup: SetupParams,
    pub pump: PumpSpec,
    #[serde(default = "default_window")]
    pub window: OamWindow,
    #[serde(default)]
    pub engine: Option<String>,
    pub output_path: PathBuf,
    #[serde(default)]
    pub output_format: OutputFormat,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Row {
    ell: i32,
    amplitude: f64,
    probability: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SpectrumFile<'a> {
    schema_version: u32,
    gamma: f64,
    eta: f64,
    pump: &'a PumpSpec,
    window: OamWindow,
    schmidt_number: f64,
    rows: Vec<Row>,
}

impl SpectrumConfig {
    fn block(&self) -> SpectrumBlock {
        SpectrumBlock {
            setup: self.setup,
            pump: self.pump.clone(),
            window: self.window,
            engine: self.engine.clone(),
        }
    }
}

pub fn run(config: &SpectrumConfig) -> CliResult<()> {
    let block = &config.block();
    let spectrum = block.compute("")?;
    let k = schmidt_number(&spectrum)?;
    let bytes = match config.output_format {
        OutputFormat::Csv => {
            let mut table = CsvTable::new(&["ell", "C", "C2"])?;
            table
                .meta("schemaVersion", SCHEMA_VERSION)
                .meta("gamma", num(block.setup.gamma()))
                .meta("eta", num(block.setup.eta()))
                .meta("pump", &block.pump.kind)
                .meta("a", optional(block.pump.a))
                .meta("K", num(k))
                .meta("window", format!("[{},{}]", block.window.min(), block.window.max()));
            for (ell, c) in spectrum.iter() {
                table.row([ell.to_string(), num(c), num(c * c)])?;
            }
            table.into_bytes()?
        }
        OutputFormat::Json => json_bytes(&SpectrumFile {
            schema_version: SCHEMA_VERSION,
            gamma: block.setup.gamma(),
            eta: block.setup.eta(),
            pump: &block.pump,
            window: block.window,
            schmidt_number: k,
            rows: spectrum
                .iter()
                .map(|(ell, c)| Row {
                    ell,
                    amplitude: c,
                    probability: c * c,
                })
                .collect(),
        })?,
    };
    write(&config.output_path, &bytes)
}
