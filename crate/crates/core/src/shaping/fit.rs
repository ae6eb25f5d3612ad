use super::RadialIntensity;
use crate::error::{Error, Result};

/// Fits `I(r) ≈ C exp(2a r²/w_p²)` over `r ≤ w_p` by least squares on `ln I`
/// with a free intercept, returning the field exponent `a`.
pub fn fit_exponential_a(profile: &RadialIntensity, w_p: f64) -> Result<f64> {
    fit_exponential_a_within(profile, w_p, w_p)
}

/// Same fit restricted to `r ≤ radius`, which keeps a diffraction-softened
/// edge out of the window; `a` is still measured against `w_p`.
pub fn fit_exponential_a_within(profile: &RadialIntensity, w_p: f64, radius: f64) -> Result<f64> {
    if !(w_p > 0.0) || !(radius > 0.0) {
        return Err(Error::Domain(format!("fit radii must be > 0, got w_p = {w_p}, radius = {radius}")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&r, &v) in profile.grid().iter().zip(profile.values()) {
        if r > radius {
            break;
        }
        if !(v > 0.0) {
            return Err(Error::Domain(format!(
                "intensity {v} at r = {r} inside the fit window has no logarithm"
            )));
        }
        xs.push((r / w_p).powi(2));
        ys.push(v.ln());
    }
    if xs.len() < 2 {
        return Err(Error::Dimension(format!(
            "need at least 2 samples within r ≤ {radius}, got {}",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(0.5 * sxy / sxx)
}
