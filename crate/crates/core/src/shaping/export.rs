use std::f64::consts::TAU;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{PhaseProfile, ShaperSystem};
use crate::error::{Error, Result};

fn wrapped(profile: &PhaseProfile, system: &ShaperSystem, xi: f64) -> f64 {
    let beta = profile.beta.unwrap_or(system.beta());
    (beta * profile.phase_at(xi)).rem_euclid(TAU)
}

/// CSV of `radius,phase` with the phase `β φ` wrapped into `[0, 2π)` and the
/// radius in the input-plane length unit.
pub fn wrapped_phase_csv(profile: &PhaseProfile, system: &ShaperSystem) -> String {
    let mut out = String::from("radius,phase\n");
    for &xi in &profile.grid {
        let _ = writeln!(out, "{},{}", xi * system.input_waist(), wrapped(profile, system, xi));
    }
    out
}

/// Pixel layout of an exported phase mask.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PgmOptions {
    pub pixels: usize,
    pub pitch: f64,
}

impl Default for PgmOptions {
    fn default() -> Self {
        Self {
            pixels: 512,
            pitch: 8e-6,
        }
    }
}

/// Square 8-bit binary PGM (P5) of the wrapped phase, gray level
/// `⌊256 · phase / 2π⌋`, centred on the optical axis.
pub fn phase_pgm(profile: &PhaseProfile, system: &ShaperSystem, options: PgmOptions) -> Result<Vec<u8>> {
    if options.pixels == 0 || !(options.pitch > 0.0) {
        return Err(Error::Domain("PGM needs at least one pixel and a positive pitch".into()));
    }
    let n = options.pixels;
    let centre = 0.5 * (n as f64 - 1.0);
    let mut out = format!("P5\n{n} {n}\n255\n").into_bytes();
    out.reserve(n * n);
    for y in 0..n {
        for x in 0..n {
            let r = options.pitch * (x as f64 - centre).hypot(y as f64 - centre);
            let level = (256.0 * wrapped(profile, system, r / system.input_waist()) / TAU).floor();
            out.push(level.clamp(0.0, 255.0) as u8);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shaping::Measure;

    fn profile() -> PhaseProfile {
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.03).collect();
        PhaseProfile {
            alpha: grid.clone(),
            phase: grid.iter().map(|x| x * x / 2.0).collect(),
            grid,
            energy_constant: 1.0,
            residual: 0.0,
            measure: Measure::Radial,
            beta: Some(10.0),
        }
    }

    #[test]
    fn csv_phase_is_wrapped() {
        let s = ShaperSystem::new(0.075, 780e-9, 3e-3, 200e-6).unwrap();
        let csv = wrapped_phase_csv(&profile(), &s);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("radius,phase"));
        for line in lines {
            let phase: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert!((0.0..TAU).contains(&phase));
        }
    }

    #[test]
    fn pgm_header_and_size() {
        let s = ShaperSystem::new(0.075, 780e-9, 3e-3, 200e-6).unwrap();
        let bytes = phase_pgm(&profile(), &s, PgmOptions { pixels: 16, pitch: 1e-4 }).unwrap();
        let header = b"P5\n16 16\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        assert_eq!(bytes.len(), header.len() + 256);
    }
}
