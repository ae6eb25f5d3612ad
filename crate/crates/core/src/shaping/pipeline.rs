use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    apply_phase, propagate_fourier, relative_l2_error, solve_phase_ode, uniform_grid, Measure, PhaseProfile,
    RadialField, RadialIntensity, RadialShape, ShaperSystem,
};
use crate::error::Result;

/// Sampling of a design-and-check run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct ShapingOptions {
    pub input_table_points: usize,
    pub target_table_points: usize,
    /// Nodes of the design grid, spread over the input shape's extent.
    pub design_points: usize,
    /// Samples of the input field, spread over the input shape's extent.
    pub field_points: usize,
    pub measure: Measure,
    /// Distance past the focal plane, in metres.
    pub defocus: f64,
}

impl Default for ShapingOptions {
    fn default() -> Self {
        Self {
            input_table_points: 8001,
            target_table_points: 2001,
            design_points: 4001,
            field_points: 4001,
            measure: Measure::Radial,
            defocus: 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ShapingRun {
    pub profile: PhaseProfile,
    pub output: RadialField,
    /// Output intensity with radii in units of the output waist.
    pub intensity: RadialIntensity,
    pub target: RadialIntensity,
    /// Relative L2 error over the whole output plane.
    pub l2_error: f64,
    /// `|E_out / E_in - 1|`.
    pub energy_error: f64,
}

/// Designs the phase mapping `input` onto `target`, applies it to the input
/// field `√I(r / w0)` and propagates to the (defocused) Fourier plane.
pub fn shape_beam(
    system: &ShaperSystem,
    input: &dyn RadialShape,
    target: &dyn RadialShape,
    options: &ShapingOptions,
) -> Result<ShapingRun> {
    let input_table = input.table(options.input_table_points)?;
    let target_table = target.table(options.target_table_points)?;
    let grid = uniform_grid(input.extent(), options.design_points);
    let profile = solve_phase_ode(&input_table, &target_table, &grid, options.measure)?.with_beta(system.beta());

    let w0 = system.input_waist();
    let r = uniform_grid(input.extent() * w0, options.field_points);
    let values = r
        .iter()
        .map(|r| Complex64::new(input.intensity(r / w0).max(0.0).sqrt(), 0.0))
        .collect();
    let field = RadialField::new(r, values)?;
    let output = propagate_fourier(&apply_phase(&field, &profile, system)?, system, options.defocus)?;
    let intensity = output.intensity_profile(system.output_waist())?;
    Ok(ShapingRun {
        l2_error: relative_l2_error(&intensity, &target_table, f64::INFINITY),
        energy_error: (output.energy() / field.energy() - 1.0).abs(),
        profile,
        output,
        intensity,
        target: target_table,
    })
}
