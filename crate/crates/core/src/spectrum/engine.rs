use super::{exponential_spectrum, gaussian_spectrum, numerical_spectrum};
use super::{ClosedForm, OamWindow, PumpProfile, SetupParams, SpiralSpectrum};
use crate::error::{Error, Result};

/// A way of turning a pump profile into a normalized spiral spectrum.
pub trait SpectrumEngine: Send + Sync {
    fn name(&self) -> &'static str;

    fn spectrum(&self, pump: &dyn PumpProfile, params: &SetupParams, window: OamWindow) -> Result<SpiralSpectrum>;
}

/// Analytic amplitudes; only pumps with a known closed form are accepted.
#[derive(Debug, Default, Clone, Copy)]
pub struct ClosedFormEngine;

impl SpectrumEngine for ClosedFormEngine {
    fn name(&self) -> &'static str {
        "closed-form"
    }

    fn spectrum(&self, pump: &dyn PumpProfile, params: &SetupParams, window: OamWindow) -> Result<SpiralSpectrum> {
        match pump.closed_form() {
            Some(ClosedForm::Gaussian) => gaussian_spectrum(params, window.min(), window.max()),
            Some(ClosedForm::TruncatedExponential { a }) => exponential_spectrum(a, params, window.min(), window.max()),
            None => Err(Error::Domain(format!(
                "no closed form for the {} pump; use the quadrature engine",
                pump.name()
            ))),
        }
    }
}

/// Adaptive quadrature of the overlap integral; works for every pump.
#[derive(Debug, Default, Clone, Copy)]
pub struct QuadratureEngine;

impl SpectrumEngine for QuadratureEngine {
    fn name(&self) -> &'static str {
        "quadrature"
    }

    fn spectrum(&self, pump: &dyn PumpProfile, params: &SetupParams, window: OamWindow) -> Result<SpiralSpectrum> {
        numerical_spectrum(pump, params, window.min(), window.max())
    }
}

pub const ENGINE_NAMES: [&str; 2] = ["closed-form", "quadrature"];

pub fn engine_by_name(name: &str) -> Result<Box<dyn SpectrumEngine>> {
    match name {
        "closed-form" => Ok(Box::new(ClosedFormEngine)),
        "quadrature" => Ok(Box::new(QuadratureEngine)),
        other => Err(Error::UnknownStrategy {
            kind: "spectrum engine",
            name: other.to_string(),
            available: ENGINE_NAMES.join(", "),
        }),
    }
}
