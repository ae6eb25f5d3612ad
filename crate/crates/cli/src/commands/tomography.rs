use std::path::PathBuf;

use oam_core::tomography::{
    is_prime, maximally_entangled, reconstruct_counts, reconstructor_by_name, run_pipeline, theoretical_state,
    CountsRecord, DensityMatrix, Noise, PipelineConfig, PipelineReport,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::statistics::{Data, Max, Min, OrderStatistics, Statistics};

use super::spectrum::SpectrumBlock;
use crate::config::{require_positive, OutputFormat, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};
use crate::output::{json_bytes, num, optional, write, CsvTable};

/// State whose counts are simulated, and against which results are scored.
#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StateSpec {
    Mes,
    Spectrum(SpectrumBlock),
}

fn mle() -> String {
    "mle".into()
}

fn one() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TomographyConfig {
    #[allow(dead_code)]
    pub schema_version: u32,
    pub d: usize,
    pub state: StateSpec,
    #[serde(rename = "N", default)]
    pub flux: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub noise: Noise,
    #[serde(default = "mle")]
    pub reconstructor: String,
    /// Reconstruct these counts instead of simulating.
    #[serde(default)]
    pub counts_path: Option<PathBuf>,
    /// Also write the (first) simulated counts here.
    #[serde(default)]
    pub counts_output: Option<PathBuf>,
    /// Independent runs with seeds `seed, seed + 1, ...`.
    #[serde(default = "one")]
    pub repeats: usize,
    pub output_path: PathBuf,
    #[serde(default)]
    pub output_format: OutputFormat,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
struct Metrics {
    seed: Option<u64>,
    fidelity_to_mes: f64,
    fidelity_to_truth: f64,
    linear_entropy: f64,
    exact_linear_entropy: f64,
    cglmp: f64,
    witness: bool,
    raw_estimate_physical: bool,
    min_eigenvalue: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    objective: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iterations: Option<usize>,
}

impl Metrics {
    fn new(seed: Option<u64>, r: &PipelineReport) -> Self {
        Self {
            seed,
            fidelity_to_mes: r.fidelity_to_mes,
            fidelity_to_truth: r.fidelity_to_truth,
            linear_entropy: r.linear_entropy,
            exact_linear_entropy: r.exact_linear_entropy,
            cglmp: r.cglmp,
            witness: r.witness,
            raw_estimate_physical: r.reconstruction.physical,
            min_eigenvalue: r.reconstruction.min_eigenvalue,
            objective: r.reconstruction.objective,
            iterations: r.reconstruction.iterations,
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct Summary {
    median: f64,
    mean: f64,
    std_dev: f64,
    min: f64,
    max: f64,
}

impl Summary {
    fn of(values: Vec<f64>) -> Self {
        let mean = values.iter().mean();
        let std_dev = if values.len() > 1 { values.iter().std_dev() } else { 0.0 };
        let mut data = Data::new(values);
        Self {
            median: data.median(),
            mean,
            std_dev,
            min: data.min(),
            max: data.max(),
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct Spread {
    fidelity_to_mes: Summary,
    cglmp: Summary,
    linear_entropy: Summary,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ResultFile<'a> {
    schema_version: u32,
    d: usize,
    reconstructor: &'a str,
    noise: Noise,
    #[serde(rename = "N")]
    flux: f64,
    density: oam_core::tomography::DensityMatrixJson,
    metrics: &'a Metrics,
    #[serde(skip_serializing_if = "Option::is_none")]
    spread: Option<Spread>,
    #[serde(skip_serializing_if = "Option::is_none")]
    runs: Option<&'a [Metrics]>,
}

impl TomographyConfig {
    fn validate(&self) -> CliResult<()> {
        if self.d < 3 || self.d % 2 == 0 || !is_prime(self.d) {
            return Err(CliError::config("d", format!("must be an odd prime (3, 5, 7, ...), got {}", self.d)));
        }
        if self.counts_path.is_none() {
            match self.flux {
                Some(n) => require_positive("N", n)?,
                None => return Err(CliError::config("N", "required unless countsPath is given")),
            }
        }
        if self.noise == Noise::Poisson && self.seed.is_none() {
            return Err(CliError::config("seed", "an explicit seed is required when noise is enabled"));
        }
        if self.repeats == 0 {
            return Err(CliError::config("repeats", "must be at least 1"));
        }
        if self.counts_path.is_some() && self.repeats > 1 {
            return Err(CliError::config("repeats", "imported counts allow a single run"));
        }
        Ok(())
    }

    fn truth(&self) -> CliResult<DensityMatrix> {
        match &self.state {
            StateSpec::Mes => Ok(maximally_entangled(self.d)?),
            StateSpec::Spectrum(block) => {
                let spectrum = block.compute("state.")?;
                theoretical_state(&spectrum, self.d).map_err(|e| CliError::config("state.window", e))
            }
        }
    }
}

pub fn run(config: &TomographyConfig) -> CliResult<()> {
    config.validate()?;
    let reconstructor =
        reconstructor_by_name(&config.reconstructor).map_err(|e| CliError::config("reconstructor", e))?;
    let truth = config.truth()?;

    let reports: Vec<(Option<u64>, PipelineReport)> = match &config.counts_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::config("countsPath", format!("cannot read {}: {e}", path.display())))?;
            let counts = CountsRecord::from_json(&text).map_err(|e| CliError::config("countsPath", e))?;
            if counts.d != config.d {
                return Err(CliError::config("countsPath", format!("counts have d = {}, config has {}", counts.d, config.d)));
            }
            let seed = counts.seed;
            vec![(seed, reconstruct_counts(&truth, counts, reconstructor.as_ref())?)]
        }
        None => {
            let base = config.seed.unwrap_or(0);
            let flux = config.flux.expect("validated");
            (0..config.repeats as u64)
                .into_par_iter()
                .map(|i| {
                    let pipeline = PipelineConfig {
                        flux,
                        seed: base + i,
                        noise: config.noise,
                    };
                    run_pipeline(&truth, &pipeline, reconstructor.as_ref()).map(|r| (config.seed.map(|s| s + i), r))
                })
                .collect::<oam_core::Result<_>>()?
        }
    };

    let (_, first) = &reports[0];
    if let Some(path) = &config.counts_output {
        write(path, &json_bytes(&first.counts)?)?;
    }
    let metrics: Vec<Metrics> = reports.iter().map(|(seed, r)| Metrics::new(*seed, r)).collect();
    let density = first.reconstruction.state.to_json();

    match config.output_format {
        OutputFormat::Json => {
            let spread = (metrics.len() > 1).then(|| Spread {
                fidelity_to_mes: Summary::of(metrics.iter().map(|m| m.fidelity_to_mes).collect()),
                cglmp: Summary::of(metrics.iter().map(|m| m.cglmp).collect()),
                linear_entropy: Summary::of(metrics.iter().map(|m| m.linear_entropy).collect()),
            });
            let file = ResultFile {
                schema_version: SCHEMA_VERSION,
                d: config.d,
                reconstructor: reconstructor.name(),
                noise: first.counts.noise,
                flux: first.counts.total_pair_flux,
                density,
                metrics: &metrics[0],
                spread,
                runs: (metrics.len() > 1).then_some(metrics.as_slice()),
            };
            write(&config.output_path, &json_bytes(&file)?)
        }
        OutputFormat::Csv => {
            let mut table = CsvTable::new(&[
                "seed",
                "fidelityToMes",
                "fidelityToTruth",
                "linearEntropy",
                "exactLinearEntropy",
                "cglmp",
                "witness",
                "minEigenvalue",
                "objective",
                "iterations",
            ])?;
            table
                .meta("schemaVersion", SCHEMA_VERSION)
                .meta("d", config.d)
                .meta("reconstructor", reconstructor.name())
                .meta("noise", serde_json::to_value(first.counts.noise).expect("enum").as_str().unwrap_or(""))
                .meta("N", num(first.counts.total_pair_flux));
            for m in &metrics {
                table.row([
                    m.seed.map(|s| s.to_string()).unwrap_or_default(),
                    num(m.fidelity_to_mes),
                    num(m.fidelity_to_truth),
                    num(m.linear_entropy),
                    num(m.exact_linear_entropy),
                    num(m.cglmp),
                    m.witness.to_string(),
                    num(m.min_eigenvalue),
                    optional(m.objective),
                    m.iterations.map(|i| i.to_string()).unwrap_or_default(),
                ])?;
            }
            write(&config.output_path, &table.into_bytes()?)?;
            write(&config.output_path.with_extension("density.json"), &json_bytes(&density)?)
        }
    }
}
