use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{fit_exponential_a, propagate_fourier_to, RadialField, ShaperSystem};
use crate::error::{Error, Result};
use crate::special::bessel_j;

/// Airy intensity `[J_n(2πρ)/(2πρ)]²` for `n ∈ {0, 1}`.
///
/// At `ρ = 0` the first-order profile takes its limit `1/4`; the zeroth-order
/// quotient has no finite limit and returns `+∞`.
pub fn airy_profile(rho: f64, order: i32) -> f64 {
    let x = 2.0 * PI * rho;
    if x == 0.0 {
        return if order == 0 { f64::INFINITY } else { 0.25 };
    }
    (bessel_j(order, x) / x).powi(2)
}

/// Input field `J1(2πr/R)/(2πr/R)` with `R = λf/w1`, whose Fourier-plane
/// image is a uniform disk of radius `w1`. Sampled out to `rings · R`.
pub fn airy_field(system: &ShaperSystem, rings: f64, points: usize) -> Result<RadialField> {
    if !(rings > 0.0) {
        return Err(Error::Domain(format!("Airy field extent must be > 0, got {rings}")));
    }
    let scale = system.wavelength() * system.focal_length() / system.output_waist();
    let grid = super::uniform_grid(rings * scale, points);
    let values = grid
        .iter()
        .map(|r| {
            let x = 2.0 * PI * r / scale;
            Complex64::new(if x == 0.0 { 0.5 } else { bessel_j(1, x) / x }, 0.0)
        })
        .collect();
    RadialField::new(grid, values)
}

/// Exponent of the best truncated-exponential pump at one propagation distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DefocusFit {
    pub defocus: f64,
    pub a: f64,
}

/// Propagates an Airy input to `f + δ` for each `δ` and fits `a` over
/// `r ≤ w1` of the resulting intensity.
pub fn airy_defocus_scan(
    system: &ShaperSystem,
    defocus: &[f64],
    rings: f64,
    input_points: usize,
) -> Result<Vec<DefocusFit>> {
    let input = airy_field(system, rings, input_points)?;
    let w1 = system.output_waist();
    let aperture = input.grid()[input.grid().len() - 1];
    let out_step = system.wavelength() * system.focal_length() / (16.0 * aperture);
    defocus
        .iter()
        .map(|&d| {
            // Rays from the outer rings walk off by about r·δ/f.
            let extent = 3.0 * w1 + 1.5 * aperture * d.abs() / system.focal_length();
            let points = ((extent / out_step).ceil() as usize + 1) | 1;
            let grid = super::uniform_grid(out_step * (points - 1) as f64, points);
            let field = propagate_fourier_to(&input, system, &grid, d)?;
            let profile = field.intensity_profile(w1)?;
            Ok(DefocusFit {
                defocus: d,
                a: fit_exponential_a(&profile, 1.0)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_limits_and_zero() {
        assert_eq!(airy_profile(0.0, 1), 0.25);
        assert_eq!(airy_profile(0.0, 0), f64::INFINITY);
        // first zero of J1 at 3.8317...
        assert!(airy_profile(3.831_705_970_207_512 / (2.0 * PI), 1) < 1e-30);
        assert!((airy_profile(1e-9, 1) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn airy_input_images_to_a_disk() {
        let s = ShaperSystem::new(0.075, 780e-9, 3e-3, 200e-6).unwrap();
        let fits = airy_defocus_scan(&s, &[0.0], 40.0, 8001).unwrap();
        assert!(fits[0].a.abs() < 0.1, "a = {}", fits[0].a);
    }
}
