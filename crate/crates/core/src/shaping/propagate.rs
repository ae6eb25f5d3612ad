use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{PhaseProfile, RadialField, RadialIntensity, ShaperSystem};
use crate::error::{Error, Result};
use crate::quadrature::simpson_weights;
use crate::special::bessel_j;

/// Largest tolerated relative energy mismatch between input and output planes.
pub const ENERGY_LEAKAGE_LIMIT: f64 = 1e-4;

/// Output samples per period of the finest fringe the input aperture supports.
const OVERSAMPLING: f64 = 64.0;

/// `exp(-r²/w0²)` on `points` uniform radii out to `extent` input waists.
pub fn gaussian_field(system: &ShaperSystem, extent: f64, points: usize) -> Result<RadialField> {
    let w0 = system.input_waist();
    let grid = super::uniform_grid(extent * w0, points);
    let values = grid.iter().map(|r| Complex64::new((-(r / w0).powi(2)).exp(), 0.0)).collect();
    RadialField::new(grid, values)
}

/// Multiplies the field by `exp(i β φ(r / w0))`.
pub fn apply_phase(field: &RadialField, profile: &PhaseProfile, system: &ShaperSystem) -> Result<RadialField> {
    let beta = profile.beta.unwrap_or(system.beta());
    let w0 = system.input_waist();
    let values = field
        .grid()
        .iter()
        .zip(field.values())
        .map(|(r, u)| u * Complex64::from_polar(1.0, beta * profile.phase_at(r / w0)))
        .collect();
    RadialField::new(field.grid().to_vec(), values)
}

/// Field a distance `f + defocus` behind the lens, on an automatically sized grid.
///
/// The grid reaches past the geometric extent implied by the steepest input
/// phase gradient by several diffraction widths, and samples the finest
/// fringe the input aperture can produce `OVERSAMPLING` times.
pub fn propagate_fourier(input: &RadialField, system: &ShaperSystem, defocus: f64) -> Result<RadialField> {
    let z = system.focal_length() + defocus;
    let lambda = system.wavelength();
    let intensity = input.intensity();
    let peak = intensity.iter().cloned().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::Degenerate("input field is identically zero".into()));
    }

    let r = input.grid();
    let chirp = PI * (1.0 / z - 1.0 / system.focal_length()) / lambda;
    let chirped: Vec<Complex64> = r
        .iter()
        .zip(input.values())
        .map(|(r, u)| u * Complex64::from_polar(1.0, chirp * r * r))
        .collect();
    let mut k_max: f64 = 0.0;
    for i in 1..r.len() {
        if intensity[i] > 1e-12 * peak && intensity[i - 1] > 1e-12 * peak {
            // Jumps near π are sign changes of a real amplitude, not a tilt.
            let dphi = (chirped[i] * chirped[i - 1].conj()).arg().abs();
            if dphi < 0.5 * PI {
                k_max = k_max.max(dphi / (r[i] - r[i - 1]));
            }
        }
    }
    let rho_geom = k_max * lambda * z / (2.0 * PI);

    let weights = simpson_weights(r.len(), input.spacing());
    let (m0, m2) = r.iter().zip(&intensity).zip(&weights).fold((0.0, 0.0), |(a, b), ((r, i), w)| {
        (a + i * r * w, b + i * r * r * r * w)
    });
    let width = (2.0 * m2 / m0).sqrt();
    let rho_diff = lambda * z / (PI * width);

    let rho_max = 1.25 * rho_geom + 12.0 * rho_diff;
    let step = lambda * z / (OVERSAMPLING * r[r.len() - 1]);
    let mut points = (rho_max / step).ceil() as usize + 1;
    if points % 2 == 0 {
        points += 1;
    }
    let grid = super::uniform_grid(step * (points - 1) as f64, points);
    propagate_fourier_to(input, system, &grid, defocus)
}

/// Fresnel propagation from the lens to `f + defocus`, evaluated on `output_grid`:
/// `U(ρ) = -i (2π/λz) e^{iπρ²/λz} ∫ U(r) e^{iπr²(1/z - 1/f)/λ} J0(2πrρ/λz) r dr`.
///
/// The radial integral uses composite Simpson on the input grid. Energy is
/// compared between the planes, and a mismatch above
/// [`ENERGY_LEAKAGE_LIMIT`] means the grids were too coarse or too short.
pub fn propagate_fourier_to(
    input: &RadialField,
    system: &ShaperSystem,
    output_grid: &[f64],
    defocus: f64,
) -> Result<RadialField> {
    let f = system.focal_length();
    let z = f + defocus;
    let lambda = system.wavelength();
    if !(z > 0.0) {
        return Err(Error::Domain(format!("propagation distance f + defocus must be > 0, got {z}")));
    }
    let chirp = PI * (1.0 / z - 1.0 / f) / lambda;
    let weights = simpson_weights(input.grid().len(), input.spacing());
    let source: Vec<(f64, Complex64)> = input
        .grid()
        .iter()
        .zip(input.values())
        .zip(&weights)
        .map(|((&r, &u), &w)| (r, u * Complex64::from_polar(w * r, chirp * r * r)))
        .collect();
    let scale = 2.0 * PI / (lambda * z);
    let values: Vec<Complex64> = output_grid
        .par_iter()
        .map(|&rho| {
            let kernel = scale * rho;
            let sum: Complex64 = source.iter().map(|&(r, u)| u * bessel_j(0, kernel * r)).sum();
            Complex64::new(0.0, -scale) * Complex64::from_polar(1.0, PI * rho * rho / (lambda * z)) * sum
        })
        .collect();
    let out = RadialField::new(output_grid.to_vec(), values)?;

    let e_in = input.energy();
    let leakage = (out.energy() - e_in).abs() / e_in;
    if leakage > ENERGY_LEAKAGE_LIMIT {
        return Err(Error::Sampling {
            leakage,
            limit: ENERGY_LEAKAGE_LIMIT,
        });
    }
    Ok(out)
}

/// Relative L2 distance in the radial measure between `output` and the
/// target scaled to the same total energy, accumulated over radii up to
/// `within` (in the output units).
pub fn relative_l2_error(output: &RadialIntensity, target: &RadialIntensity, within: f64) -> f64 {
    let x = output.grid();
    let y = output.values();
    let trapz = |g: &dyn Fn(usize) -> f64| -> f64 {
        (1..x.len())
            .filter(|&i| x[i] <= within)
            .map(|i| 0.5 * (g(i) * x[i] + g(i - 1) * x[i - 1]) * (x[i] - x[i - 1]))
            .sum()
    };
    let t: Vec<f64> = x.iter().map(|&s| target.value_at(s)).collect();
    let full = |g: &dyn Fn(usize) -> f64| -> f64 {
        (1..x.len())
            .map(|i| 0.5 * (g(i) * x[i] + g(i - 1) * x[i - 1]) * (x[i] - x[i - 1]))
            .sum()
    };
    let scale = full(&|i| y[i]) / full(&|i| t[i]).max(f64::MIN_POSITIVE);
    let num = trapz(&|i| (y[i] - scale * t[i]).powi(2));
    let den = trapz(&|i| (scale * t[i]).powi(2));
    (num / den).sqrt()
}
