//! Lossless diffractive beam shaping for radially symmetric pumps.
//!
//! A phase element `β φ(ξ)` placed before a Fourier lens redistributes an
//! input intensity `I` into a target `Q` in the focal plane. The phase
//! follows from the geometric ray map `α(ξ)` fixed by energy conservation,
//! `A Q(α) α' = I(ξ)`, and `φ' = α`. Designs are checked by propagating the
//! shaped field through a Hankel-transform model of the lens.

mod airy;
mod design;
mod export;
mod fit;
mod pipeline;
mod propagate;
mod targets;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use airy::{airy_defocus_scan, airy_field, airy_profile, DefocusFit};
pub use design::{energy_constant, flattop_phase_reference, solve_phase_ode};
pub use export::{phase_pgm, wrapped_phase_csv, PgmOptions};
pub use fit::{fit_exponential_a, fit_exponential_a_within};
pub use pipeline::{shape_beam, ShapingOptions, ShapingRun};
pub use propagate::{
    apply_phase, gaussian_field, propagate_fourier, propagate_fourier_to, relative_l2_error, ENERGY_LEAKAGE_LIMIT,
};
pub use targets::{shape_by_name, AiryShape, ExponentialShape, FlatTopShape, GaussianShape, RadialShape, ShapeSpec, SHAPE_NAMES};

/// Radial coordinate measure used for energy bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    /// `ds` on the half-line (even extension of a 1D profile).
    Line,
    /// `s ds`, the radial measure of a rotationally symmetric 2D beam.
    #[default]
    Radial,
}

/// Tabulated intensity on an increasing radial grid starting at 0, linear
/// between samples and zero past the last one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialIntensity {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl RadialIntensity {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() || grid.len() < 2 {
            return Err(Error::Dimension(format!(
                "intensity needs matching grid/value tables of at least 2 points, got {} and {}",
                grid.len(),
                values.len()
            )));
        }
        if grid[0] != 0.0 || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("intensity grid must start at 0 and increase strictly".into()));
        }
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::Domain("intensity values must be finite and non-negative".into()));
        }
        let out = Self { grid, values };
        if !(out.total(Measure::Line) > 0.0) {
            return Err(Error::Degenerate("intensity has zero total energy".into()));
        }
        Ok(out)
    }

    /// Samples `f` on `n` uniform points over `[0, extent]`.
    pub fn sample<F: Fn(f64) -> f64>(f: F, extent: f64, n: usize) -> Result<Self> {
        let grid = uniform_grid(extent, n);
        let values = grid.iter().map(|&s| f(s)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn extent(&self) -> f64 {
        *self.grid.last().expect("validated non-empty")
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.grid.clone(), self.values.iter().map(|v| v * factor).collect())
    }

    pub fn value_at(&self, s: f64) -> f64 {
        if s < 0.0 || s > self.extent() {
            return 0.0;
        }
        let i = self.cell_of(s);
        let t = (s - self.grid[i]) / (self.grid[i + 1] - self.grid[i]);
        self.values[i] + t * (self.values[i + 1] - self.values[i])
    }

    fn cell_of(&self, s: f64) -> usize {
        self.grid.partition_point(|&x| x <= s).saturating_sub(1).min(self.grid.len() - 2)
    }

    /// Exact integral of the linear interpolant over `[grid[i], grid[i] + len]`
    /// with `len ≤ grid[i+1] - grid[i]`.
    fn partial_cell(&self, i: usize, upper: f64, measure: Measure) -> f64 {
        let (s0, s1) = (self.grid[i], self.grid[i + 1]);
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        let slope = (v1 - v0) / (s1 - s0);
        let t = upper - s0;
        match measure {
            Measure::Line => v0 * t + 0.5 * slope * t * t,
            // ∫_0^t (v0 + m u)(s0 + u) du
            Measure::Radial => v0 * s0 * t + 0.5 * (v0 + slope * s0) * t * t + slope * t * t * t / 3.0,
        }
    }

    /// Cumulative integral at every grid node.
    pub fn cumulative(&self, measure: Measure) -> Vec<f64> {
        let mut acc = 0.0;
        std::iter::once(0.0)
            .chain((0..self.grid.len() - 1).map(|i| {
                acc += self.partial_cell(i, self.grid[i + 1], measure);
                acc
            }))
            .collect()
    }

    /// `∫_0^s I(u) dμ(u)` for any `s ≥ 0`.
    pub fn cumulative_at(&self, s: f64, measure: Measure) -> f64 {
        let cum = self.cumulative(measure);
        self.cumulative_at_with(&cum, s, measure)
    }

    fn cumulative_at_with(&self, cum: &[f64], s: f64, measure: Measure) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s >= self.extent() {
            return *cum.last().expect("non-empty");
        }
        let i = self.cell_of(s);
        cum[i] + self.partial_cell(i, s, measure)
    }

    pub fn total(&self, measure: Measure) -> f64 {
        *self.cumulative(measure).last().expect("non-empty")
    }
}

/// Designed phase: ray map `alpha`, phase `phase` (unwrapped, `φ(0) = 0`),
/// and the bookkeeping residual `max |A ∫₀^α Q - ∫₀^ξ I| / ∫ I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseProfile {
    pub grid: Vec<f64>,
    pub alpha: Vec<f64>,
    pub phase: Vec<f64>,
    pub energy_constant: f64,
    pub residual: f64,
    pub measure: Measure,
    pub beta: Option<f64>,
}

impl PhaseProfile {
    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = Some(beta);
        self
    }

    /// Linear interpolation of `φ`, continued with slope `α` past the grid.
    pub fn phase_at(&self, xi: f64) -> f64 {
        let n = self.grid.len();
        let last = self.grid[n - 1];
        if xi >= last {
            return self.phase[n - 1] + self.alpha[n - 1] * (xi - last);
        }
        let i = self.grid.partition_point(|&x| x <= xi).saturating_sub(1).min(n - 2);
        let t = (xi - self.grid[i]) / (self.grid[i + 1] - self.grid[i]);
        self.phase[i] + t * (self.phase[i + 1] - self.phase[i])
    }
}

/// Fourier-lens shaping geometry. `beta = 2π w0 w1 / (λ f)` is derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SystemSpec", into = "SystemSpec")]
pub struct ShaperSystem {
    focal_length: f64,
    wavelength: f64,
    input_waist: f64,
    output_waist: f64,
    beta: f64,
}

impl ShaperSystem {
    pub fn new(focal_length: f64, wavelength: f64, input_waist: f64, output_waist: f64) -> Result<Self> {
        for (name, v) in [
            ("focalLength", focal_length),
            ("wavelength", wavelength),
            ("inputWaist", input_waist),
            ("outputWaist", output_waist),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(Self {
            focal_length,
            wavelength,
            input_waist,
            output_waist,
            beta: 2.0 * std::f64::consts::PI * input_waist * output_waist / (wavelength * focal_length),
        })
    }

    /// Chooses the output waist that realizes `beta` for the given optics.
    pub fn from_beta(beta: f64, focal_length: f64, wavelength: f64, input_waist: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::Domain(format!("beta must be > 0, got {beta}")));
        }
        let output_waist = beta * wavelength * focal_length / (2.0 * std::f64::consts::PI * input_waist);
        Self::new(focal_length, wavelength, input_waist, output_waist)
    }

    pub fn focal_length(&self) -> f64 {
        self.focal_length
    }
    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }
    pub fn input_waist(&self) -> f64 {
        self.input_waist
    }
    pub fn output_waist(&self) -> f64 {
        self.output_waist
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SystemSpec {
    pub focal_length: f64,
    pub wavelength: f64,
    pub input_waist: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_waist: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl TryFrom<SystemSpec> for ShaperSystem {
    type Error = Error;
    fn try_from(s: SystemSpec) -> Result<Self> {
        match (s.output_waist, s.beta) {
            (Some(w1), None) => ShaperSystem::new(s.focal_length, s.wavelength, s.input_waist, w1),
            (None, Some(beta)) => ShaperSystem::from_beta(beta, s.focal_length, s.wavelength, s.input_waist),
            _ => Err(Error::Domain("specify exactly one of outputWaist or beta".into())),
        }
    }
}

impl From<ShaperSystem> for SystemSpec {
    fn from(s: ShaperSystem) -> Self {
        SystemSpec {
            focal_length: s.focal_length,
            wavelength: s.wavelength,
            input_waist: s.input_waist,
            output_waist: Some(s.output_waist),
            beta: None,
        }
    }
}

/// Complex field sampled on a uniform radial grid starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    grid: Vec<f64>,
    values: Vec<Complex64>,
}

impl RadialField {
    pub fn new(grid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if grid.len() != values.len() || grid.len() < 3 {
            return Err(Error::Dimension("field needs matching grid/value tables of at least 3 points".into()));
        }
        let h = grid[1] - grid[0];
        if grid[0] != 0.0 || !(h > 0.0) || grid.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h) {
            return Err(Error::Domain("field grid must be uniform and start at 0".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
    pub fn spacing(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// `∫ |U|² r dr` by composite Simpson.
    pub fn energy(&self) -> f64 {
        let w = crate::quadrature::simpson_weights(self.grid.len(), self.spacing());
        self.values
            .iter()
            .zip(&self.grid)
            .zip(&w)
            .map(|((v, r), w)| v.norm_sqr() * r * w)
            .sum()
    }

    /// Intensity as a tabulated profile with radii divided by `unit`.
    pub fn intensity_profile(&self, unit: f64) -> Result<RadialIntensity> {
        RadialIntensity::new(self.grid.iter().map(|r| r / unit).collect(), self.intensity())
    }
}

pub(crate) fn uniform_grid(extent: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| extent * i as f64 / (n - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_is_derived() {
        let s = ShaperSystem::new(0.075, 780e-9, 3e-3, 200e-6).unwrap();
        let expected = 2.0 * std::f64::consts::PI * 3e-3 * 200e-6 / (780e-9 * 0.075);
        assert_eq!(s.beta(), expected);
        assert!((s.beta() - 64.44).abs() < 0.01);
        let t = ShaperSystem::from_beta(64.4, 0.075, 780e-9, 3e-3).unwrap();
        assert!((t.beta() - 64.4).abs() < 1e-12);
    }

    #[test]
    fn cumulative_is_exact_for_linear_pieces() {
        let i = RadialIntensity::new(vec![0.0, 1.0, 3.0], vec![2.0, 4.0, 0.0]).unwrap();
        assert!((i.total(Measure::Line) - (3.0 + 4.0)).abs() < 1e-14);
        // ∫0^1 (2+2s) s ds + ∫1^3 (6-2s) s ds = 5/3 + 20/3
        assert!((i.total(Measure::Radial) - 25.0 / 3.0).abs() < 1e-13);
        assert!((i.cumulative_at(2.0, Measure::Line) - (3.0 + 3.0)).abs() < 1e-14);
        assert_eq!(i.cumulative_at(10.0, Measure::Line), 7.0);
    }

    #[test]
    fn intensity_validation() {
        assert!(RadialIntensity::new(vec![0.1, 1.0], vec![1.0, 1.0]).is_err());
        assert!(RadialIntensity::new(vec![0.0, 1.0], vec![-1.0, 1.0]).is_err());
        assert!(RadialIntensity::new(vec![0.0, 1.0], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn system_spec_needs_exactly_one_of_waist_or_beta() {
        let both = r#"{"focalLength":0.075,"wavelength":7.8e-7,"inputWaist":0.003,"outputWaist":2e-4,"beta":64.4}"#;
        assert!(serde_json::from_str::<ShaperSystem>(both).is_err());
        let beta = r#"{"focalLength":0.075,"wavelength":7.8e-7,"inputWaist":0.003,"beta":64.4}"#;
        assert!((serde_json::from_str::<ShaperSystem>(beta).unwrap().beta() - 64.4).abs() < 1e-12);
    }
}
