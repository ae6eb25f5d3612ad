use std::path::PathBuf;

use oam_core::shaping::{
    fit_exponential_a, fit_exponential_a_within, phase_pgm, relative_l2_error, shape_beam, wrapped_phase_csv,
    PgmOptions, RadialIntensity, ShapeSpec, ShaperSystem, ShapingOptions, ShapingRun,
};
use serde::{Deserialize, Serialize};

use crate::config::{OutputFormat, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};
use crate::output::{json_bytes, num, write, CsvTable};

fn gaussian() -> ShapeSpec {
    ShapeSpec::named("gaussian")
}

fn default_fit_radius() -> f64 {
    0.9
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ShapeConfig {
    #[allow(dead_code)]
    pub schema_version: u32,
    pub system: ShaperSystem,
    #[serde(default = "gaussian")]
    pub input: ShapeSpec,
    pub target: ShapeSpec,
    #[serde(default)]
    pub sampling: ShapingOptions,
    /// Writes `mask.pgm` when present.
    #[serde(default)]
    pub pgm: Option<PgmOptions>,
    /// Outer radius, in output waists, of the interior exponent fit.
    #[serde(default = "default_fit_radius")]
    pub fit_radius: f64,
    /// Directory receiving the phase, mask, intensity and metadata files.
    pub output_path: PathBuf,
    #[serde(default)]
    pub output_format: OutputFormat,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Meta<'a> {
    schema_version: u32,
    input: &'a ShapeSpec,
    target: &'a ShapeSpec,
    beta: f64,
    output_waist: f64,
    defocus: f64,
    energy_constant: f64,
    mapping_residual: f64,
    energy_error: f64,
    l2_error: f64,
    l2_error_within_support: f64,
    ray_map_shift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    fitted_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fitted_a_interior: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit_radius: Option<f64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct IntensityFile {
    schema_version: u32,
    radius: Vec<f64>,
    intensity: Vec<f64>,
    target: Vec<f64>,
}

/// Target values on the output grid, scaled to the output's radial energy.
fn scaled_target(output: &RadialIntensity, target: &RadialIntensity) -> Vec<f64> {
    let x = output.grid();
    let t: Vec<f64> = x.iter().map(|&s| target.value_at(s)).collect();
    let energy = |v: &[f64]| -> f64 {
        (1..x.len())
            .map(|i| 0.5 * (v[i] * x[i] + v[i - 1] * x[i - 1]) * (x[i] - x[i - 1]))
            .sum()
    };
    let scale = energy(output.values()) / energy(&t).max(f64::MIN_POSITIVE);
    t.into_iter().map(|v| v * scale).collect()
}

/// Largest `|α(ξ) - ξ|` where the input carries at least `1e-6` of its peak.
fn ray_map_shift(run: &ShapingRun, input: &dyn oam_core::shaping::RadialShape) -> f64 {
    let peak = input.intensity(0.0);
    run.profile
        .grid
        .iter()
        .zip(&run.profile.alpha)
        .filter(|(x, _)| input.intensity(**x) >= 1e-6 * peak)
        .map(|(x, a)| (a - x).abs())
        .fold(0.0, f64::max)
}

pub fn run(config: &ShapeConfig) -> CliResult<()> {
    let input = config.input.build().map_err(|e| CliError::config("input", e))?;
    let target = config.target.build().map_err(|e| CliError::config("target", e))?;
    if !(config.fit_radius > 0.0) {
        return Err(CliError::config("fitRadius", format!("must be > 0, got {}", config.fit_radius)));
    }
    let s = &config.sampling;
    for (field, n) in [
        ("sampling.inputTablePoints", s.input_table_points),
        ("sampling.targetTablePoints", s.target_table_points),
        ("sampling.designPoints", s.design_points),
        ("sampling.fieldPoints", s.field_points),
    ] {
        if n < 3 {
            return Err(CliError::config(field, format!("need at least 3 points, got {n}")));
        }
    }

    let run = shape_beam(&config.system, input.as_ref(), target.as_ref(), s)?;
    let dir = &config.output_path;

    let mut phase = format!(
        "# schemaVersion={SCHEMA_VERSION}\n# beta={}\n# inputWaist={}\n",
        config.system.beta(),
        config.system.input_waist()
    );
    phase.push_str(&wrapped_phase_csv(&run.profile, &config.system));
    write(&dir.join("phase.csv"), phase.as_bytes())?;

    if let Some(pgm) = config.pgm {
        write(&dir.join("mask.pgm"), &phase_pgm(&run.profile, &config.system, pgm)?)?;
    }

    let target_on_grid = scaled_target(&run.intensity, &run.target);
    match config.output_format {
        OutputFormat::Csv => {
            let mut table = CsvTable::new(&["radius", "intensity", "target"])?;
            table
                .meta("schemaVersion", SCHEMA_VERSION)
                .meta("radiusUnit", "outputWaist")
                .meta("l2Error", num(run.l2_error));
            for ((r, v), t) in run.intensity.grid().iter().zip(run.intensity.values()).zip(&target_on_grid) {
                table.row([num(*r), num(*v), num(*t)])?;
            }
            write(&dir.join("fourier.csv"), &table.into_bytes()?)?;
        }
        OutputFormat::Json => write(
            &dir.join("fourier.json"),
            &json_bytes(&IntensityFile {
                schema_version: SCHEMA_VERSION,
                radius: run.intensity.grid().to_vec(),
                intensity: run.intensity.values().to_vec(),
                target: target_on_grid,
            })?,
        )?,
    }

    let exponential = config.target.kind == "exponential";
    let meta = Meta {
        schema_version: SCHEMA_VERSION,
        input: &config.input,
        target: &config.target,
        beta: config.system.beta(),
        output_waist: config.system.output_waist(),
        defocus: s.defocus,
        energy_constant: run.profile.energy_constant,
        mapping_residual: run.profile.residual,
        energy_error: run.energy_error,
        l2_error: run.l2_error,
        l2_error_within_support: relative_l2_error(&run.intensity, &run.target, target.extent()),
        ray_map_shift: ray_map_shift(&run, input.as_ref()),
        fitted_a: if exponential { Some(fit_exponential_a(&run.intensity, 1.0)?) } else { None },
        fitted_a_interior: if exponential {
            Some(fit_exponential_a_within(&run.intensity, 1.0, config.fit_radius)?)
        } else {
            None
        },
        fit_radius: exponential.then_some(config.fit_radius),
    };
    write(&dir.join("meta.json"), &json_bytes(&meta)?)
}
