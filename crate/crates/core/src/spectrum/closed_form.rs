//! Analytic overlap amplitudes for the Gaussian and truncated-exponential pumps.
//!
//! With the substitution `t = 2r²/w_si²` the overlap integral reduces to
//! `∫ t^|ℓ| e^{-ct} dt / |ℓ|!` with `c = (2γ² + 2η² - a) / 2γ²`. Over the
//! half-line this is `c^{-(|ℓ|+1)}`; truncating the pump at `r = w_p` cuts
//! the integral at `t = 2γ²` and leaves the regularized lower incomplete
//! gamma `P(|ℓ|+1, 2γ² + 2η² - a)` as an extra factor.

use super::{OamWindow, SetupParams, SpiralSpectrum};
use crate::error::{Error, Result};
use crate::special::ln_regularized_lower_gamma_int;

fn from_log_amplitudes(window: OamWindow, ln_amp: impl Fn(u32) -> f64) -> Result<SpiralSpectrum> {
    let logs: Vec<f64> = window.iter().map(|ell| ln_amp(ell.unsigned_abs())).collect();
    let peak = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !peak.is_finite() {
        return Err(Error::Degenerate("closed-form amplitudes vanish on the whole window".into()));
    }
    let amplitudes = logs.iter().map(|l| (l - peak).exp()).collect();
    SpiralSpectrum::from_amplitudes(window, amplitudes)?.normalize()
}

/// Normalized spectrum for an untruncated Gaussian pump:
/// `C(-ℓ, ℓ) ∝ [2γ² / (2γ² + 2η² + 1)]^|ℓ|`.
pub fn gaussian_spectrum(params: &SetupParams, ell_min: i32, ell_max: i32) -> Result<SpiralSpectrum> {
    let window = OamWindow::new(ell_min, ell_max)?;
    let g2 = 2.0 * params.gamma().powi(2);
    let ratio_ln = (g2 / (g2 + 2.0 * params.eta().powi(2) + 1.0)).ln();
    from_log_amplitudes(window, |l| l as f64 * ratio_ln)
}

/// Denominator `2γ² + 2η² - a`; the overlap integral diverges unless positive.
pub(crate) fn exponential_denominator(a: f64, params: &SetupParams) -> Result<f64> {
    let gamma = params.gamma();
    let eta = params.eta();
    let denominator = 2.0 * gamma * gamma + 2.0 * eta * eta - a;
    if !(denominator > 0.0) {
        return Err(Error::Divergence {
            gamma,
            eta,
            a,
            denominator,
        });
    }
    Ok(denominator)
}

/// Normalized spectrum for the pump `exp(a r²/w_p²) H(w_p - r)`:
/// `C(-ℓ, ℓ) ∝ [2γ²/z]^|ℓ| [1 - Γ(1+|ℓ|, z)/|ℓ|!]` with `z = 2γ² + 2η² - a`.
pub fn exponential_spectrum(a: f64, params: &SetupParams, ell_min: i32, ell_max: i32) -> Result<SpiralSpectrum> {
    let window = OamWindow::new(ell_min, ell_max)?;
    let z = exponential_denominator(a, params)?;
    let ratio_ln = (2.0 * params.gamma().powi(2) / z).ln();
    from_log_amplitudes(window, |l| l as f64 * ratio_ln + ln_regularized_lower_gamma_int(l + 1, z))
}
