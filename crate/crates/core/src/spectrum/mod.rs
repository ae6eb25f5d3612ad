//! Coincidence amplitudes `C(-ℓ, ℓ)` of SPDC photon pairs in the OAM basis.
//!
//! Amplitudes are the overlap of the pump field with the conjugate signal and
//! idler Laguerre–Gaussian modes (radial index zero), weighted by the squared
//! single-mode-fiber collection mode. For radially symmetric pumps only the
//! anti-diagonal `ℓ_s = -ℓ_i` survives and the result depends on `|ℓ|` alone.

mod closed_form;
mod engine;
mod metrics;
mod overlap;
mod pump;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use closed_form::{exponential_spectrum, gaussian_spectrum};
pub use engine::{engine_by_name, ClosedFormEngine, QuadratureEngine, SpectrumEngine, ENGINE_NAMES};
pub use metrics::{crosstalk_visibility, scan_schmidt, schmidt_number, JointCountsMatrix, ScanCell};
pub use overlap::{lg_radial_squared, numerical_spectrum, overlap_amplitude};
pub use pump::{
    pump_by_name, AiryPump, ClosedForm, GaussianPump, PumpProfile, PumpSpec, TabulatedPump, TruncatedExponentialPump,
    PUMP_NAMES,
};

/// Beam waists at the crystal plane and the two dimensionless ratios derived
/// from them: `gamma = w_p / w_si` and `eta = w_p / w_f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SetupSpec", into = "SetupSpec")]
pub struct SetupParams {
    w_p: f64,
    w_si: f64,
    w_f: f64,
    gamma: f64,
    eta: f64,
}

impl SetupParams {
    pub fn new(w_p: f64, w_si: f64, w_f: f64) -> Result<Self> {
        for (name, w) in [("w_p", w_p), ("w_si", w_si), ("w_f", w_f)] {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::Domain(format!("{name} must be finite and > 0, got {w}")));
            }
        }
        Ok(Self {
            w_p,
            w_si,
            w_f,
            gamma: w_p / w_si,
            eta: w_p / w_f,
        })
    }

    /// Unit pump waist with the LG and fiber waists chosen to realize the
    /// requested ratios.
    pub fn from_ratios(gamma: f64, eta: f64) -> Result<Self> {
        if !(gamma > 0.0) || !(eta > 0.0) || !gamma.is_finite() || !eta.is_finite() {
            return Err(Error::Domain(format!("gamma and eta must be finite and > 0, got {gamma}, {eta}")));
        }
        Self::new(1.0, 1.0 / gamma, 1.0 / eta)
    }

    pub fn w_p(&self) -> f64 {
        self.w_p
    }
    pub fn w_si(&self) -> f64 {
        self.w_si
    }
    pub fn w_f(&self) -> f64 {
        self.w_f
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
}

/// Serialized form of [`SetupParams`]: either the three waists or the two
/// ratios (pump waist then defaults to 1).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_si: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_f: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
}

impl TryFrom<SetupSpec> for SetupParams {
    type Error = Error;
    fn try_from(spec: SetupSpec) -> Result<Self> {
        match spec {
            SetupSpec {
                w_p: Some(w_p),
                w_si: Some(w_si),
                w_f: Some(w_f),
                gamma: None,
                eta: None,
            } => SetupParams::new(w_p, w_si, w_f),
            SetupSpec {
                w_p: None,
                w_si: None,
                w_f: None,
                gamma: Some(gamma),
                eta: Some(eta),
            } => SetupParams::from_ratios(gamma, eta),
            _ => Err(Error::Domain(
                "setup needs either all of w_p, w_si, w_f or both of gamma, eta".into(),
            )),
        }
    }
}

impl From<SetupParams> for SetupSpec {
    fn from(p: SetupParams) -> Self {
        SetupSpec {
            w_p: Some(p.w_p),
            w_si: Some(p.w_si),
            w_f: Some(p.w_f),
            ..SetupSpec::default()
        }
    }
}

/// Inclusive OAM window `[min, max]` containing `ℓ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "(i32, i32)", into = "(i32, i32)")]
pub struct OamWindow {
    min: i32,
    max: i32,
}

impl OamWindow {
    pub fn new(min: i32, max: i32) -> Result<Self> {
        if min > max {
            return Err(Error::Window {
                min,
                max,
                reason: "lower bound exceeds upper bound".into(),
            });
        }
        if min > 0 || max < 0 {
            return Err(Error::Window {
                min,
                max,
                reason: "window must contain l = 0".into(),
            });
        }
        Ok(Self { min, max })
    }

    pub fn symmetric(half_width: u32) -> Self {
        let h = half_width as i32;
        Self { min: -h, max: h }
    }

    pub fn min(&self) -> i32 {
        self.min
    }
    pub fn max(&self) -> i32 {
        self.max
    }
    pub fn len(&self) -> usize {
        (self.max - self.min + 1) as usize
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn max_abs(&self) -> u32 {
        self.min.unsigned_abs().max(self.max.unsigned_abs())
    }
    pub fn iter(&self) -> impl Iterator<Item = i32> {
        self.min..=self.max
    }
}

impl TryFrom<(i32, i32)> for OamWindow {
    type Error = Error;
    fn try_from((min, max): (i32, i32)) -> Result<Self> {
        OamWindow::new(min, max)
    }
}

impl From<OamWindow> for (i32, i32) {
    fn from(w: OamWindow) -> Self {
        (w.min, w.max)
    }
}

/// Non-negative coincidence amplitudes over an OAM window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpiralSpectrum {
    window: OamWindow,
    amplitudes: Vec<f64>,
    normalized: bool,
}

/// Tolerance on `Σ C² = 1` for spectra flagged as normalized.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

impl SpiralSpectrum {
    /// Builds an un-normalized spectrum; `amplitudes[i]` belongs to `ℓ = window.min() + i`.
    pub fn from_amplitudes(window: OamWindow, amplitudes: Vec<f64>) -> Result<Self> {
        if amplitudes.len() != window.len() {
            return Err(Error::Dimension(format!(
                "{} amplitudes for a window of {} modes",
                amplitudes.len(),
                window.len()
            )));
        }
        if let Some(bad) = amplitudes.iter().find(|c| !(**c >= 0.0) || !c.is_finite()) {
            return Err(Error::Domain(format!("amplitudes must be finite and non-negative, got {bad}")));
        }
        Ok(Self {
            window,
            amplitudes,
            normalized: false,
        })
    }

    /// Equal amplitudes `1/√n` on every mode of the window.
    pub fn uniform(window: OamWindow) -> Self {
        let n = window.len();
        Self {
            window,
            amplitudes: vec![1.0 / (n as f64).sqrt(); n],
            normalized: true,
        }
    }

    /// Rescales to `Σ C² = 1`.
    pub fn normalize(mut self) -> Result<Self> {
        let peak = self.amplitudes.iter().cloned().fold(0.0, f64::max);
        if !(peak > 0.0) {
            return Err(Error::Degenerate("all amplitudes vanish; spectrum cannot be normalized".into()));
        }
        // Rescale by the peak first so tiny tails neither underflow nor overflow.
        let norm = self.amplitudes.iter().map(|c| (c / peak).powi(2)).sum::<f64>().sqrt() * peak;
        for c in &mut self.amplitudes {
            *c /= norm;
        }
        self.normalized = true;
        Ok(self)
    }

    pub fn window(&self) -> OamWindow {
        self.window
    }
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }
    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, ell: i32) -> Option<f64> {
        if ell < self.window.min || ell > self.window.max {
            None
        } else {
            Some(self.amplitudes[(ell - self.window.min) as usize])
        }
    }

    pub fn probability(&self, ell: i32) -> Option<f64> {
        self.amplitude(ell).map(|c| c * c)
    }

    pub fn total_probability(&self) -> f64 {
        self.amplitudes.iter().map(|c| c * c).sum()
    }

    /// `(ℓ, C)` pairs in ascending `ℓ`.
    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.window.iter().zip(self.amplitudes.iter().copied())
    }

    /// Restriction to a narrower window (not renormalized).
    pub fn restrict(&self, window: OamWindow) -> Result<Self> {
        if window.min < self.window.min || window.max > self.window.max {
            return Err(Error::Window {
                min: window.min,
                max: window.max,
                reason: format!("exceeds spectrum window [{}, {}]", self.window.min, self.window.max),
            });
        }
        let start = (window.min - self.window.min) as usize;
        Ok(Self {
            window,
            amplitudes: self.amplitudes[start..start + window.len()].to_vec(),
            normalized: false,
        })
    }
}
