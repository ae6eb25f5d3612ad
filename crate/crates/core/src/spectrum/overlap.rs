use std::f64::consts::PI;

use super::{OamWindow, PumpProfile, SetupParams, SpiralSpectrum};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::special::ln_factorial;

/// Negative overlap values of non-negative pumps smaller than this are
/// quadrature noise and clamp to zero.
const NEGATIVE_CLAMP: f64 = 1e-12;

/// Integration range in units of the largest waist.
const RANGE_IN_WAISTS: f64 = 6.0;

/// `R_ℓ(r)²` for the `p = 0` Laguerre–Gaussian mode of waist `w`,
/// `R_ℓ(r) = √(2/(π|ℓ|!)) (1/w) (√2 r/w)^|ℓ| exp(-r²/w²)`.
pub fn lg_radial_squared(ell: u32, r: f64, w: f64) -> f64 {
    let u = 2.0 * r * r / (w * w);
    let ln_norm = (2.0 / PI).ln() - ln_factorial(ell) - 2.0 * w.ln();
    let ln_power = if ell == 0 { 0.0 } else { ell as f64 * u.ln() };
    (ln_norm + ln_power - u).exp()
}

/// Un-normalized coincidence amplitude `C(-ℓ, ℓ)` from the overlap integral
/// `2π ∫ Φ(r) R_|ℓ|(r)² G(r)² r dr` with fiber mode `G(r) = exp(-r²/w_f²)`.
pub fn overlap_amplitude(pump: &dyn PumpProfile, ell: i32, params: &SetupParams) -> Result<f64> {
    let (w_p, w_si, w_f) = (params.w_p(), params.w_si(), params.w_f());
    let l = ell.unsigned_abs();
    let w_max = w_p.max(w_si).max(w_f);
    let w_min = w_p.min(w_si).min(w_f);
    let mut r_max = RANGE_IN_WAISTS * w_max;
    if let Some(edge) = pump.support(w_p) {
        r_max = r_max.min(edge);
    }

    let step = 0.5 * w_min;
    let mut breakpoints: Vec<f64> = (1..)
        .map(|k| k as f64 * step)
        .take_while(|&r| r < r_max)
        .collect();
    breakpoints.push(w_si * (l as f64 / 2.0).sqrt());
    breakpoints.extend(pump.breakpoints(w_p));

    let integrand = |r: f64| {
        let fiber = (-2.0 * r * r / (w_f * w_f)).exp();
        2.0 * PI * pump.amplitude(r, w_p) * lg_radial_squared(l, r, w_si) * fiber * r
    };
    let tol = Tolerance {
        relative: 1e-12,
        ..Tolerance::default()
    };
    let estimate = integrate(integrand, 0.0, r_max, &breakpoints, tol).map_err(|e| match e {
        Error::Accuracy { context, residual } => Error::Accuracy {
            context: format!("overlap integral for l={ell} with {} pump: {context}", pump.name()),
            residual,
        },
        other => other,
    })?;

    let value = estimate.value;
    if pump.is_nonnegative() && value < 0.0 {
        if value < -NEGATIVE_CLAMP {
            return Err(Error::Accuracy {
                context: format!("negative overlap {value:e} for a non-negative {} pump at l={ell}", pump.name()),
                residual: estimate.error,
            });
        }
        return Ok(0.0);
    }
    Ok(value)
}

/// Normalized spectrum over `[ell_min, ell_max]` by quadrature.
///
/// Sign-changing pumps (Airy) can produce negative overlaps; those enter as
/// their magnitude, the sign being a local phase on the idler mode.
pub fn numerical_spectrum(
    pump: &dyn PumpProfile,
    params: &SetupParams,
    ell_min: i32,
    ell_max: i32,
) -> Result<SpiralSpectrum> {
    let window = OamWindow::new(ell_min, ell_max)?;
    let by_order: Vec<f64> = (0..=window.max_abs() as i32)
        .map(|l| overlap_amplitude(pump, l, params).map(f64::abs))
        .collect::<Result<_>>()?;
    let amplitudes = window.iter().map(|ell| by_order[ell.unsigned_abs() as usize]).collect();
    SpiralSpectrum::from_amplitudes(window, amplitudes)?
        .normalize()
        .map_err(|_| Error::Degenerate(format!("{} pump has zero overlap with every mode in the window", pump.name())))
}
