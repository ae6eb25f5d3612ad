use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{exponential_spectrum, OamWindow, SetupParams, SpiralSpectrum, NORMALIZATION_TOLERANCE};
use crate::error::{Error, Result};

/// Schmidt number `K = 1 / Σ C⁴` of a normalized spectrum.
pub fn schmidt_number(spectrum: &SpiralSpectrum) -> Result<f64> {
    let total = spectrum.total_probability();
    if !spectrum.is_normalized() || (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Normalization(total));
    }
    let purity: f64 = spectrum.amplitudes().iter().map(|c| c.powi(4)).sum();
    Ok(1.0 / purity)
}

/// Joint OAM coincidence counts on a `(2L+1) × (2L+1)` grid, `ℓ_s, ℓ_i ∈ [-L, L]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointCountsMatrix {
    half_width: usize,
    counts: Vec<f64>,
}

impl JointCountsMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n < 3 || n % 2 == 0 {
            return Err(Error::Dimension(format!(
                "joint counts need an odd size of at least 3, got {n}"
            )));
        }
        if let Some(row) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension(format!("row of length {} in a {n}x{n} matrix", row.len())));
        }
        let counts: Vec<f64> = rows.into_iter().flatten().collect();
        if counts.iter().any(|c| !(*c >= 0.0) || !c.is_finite()) {
            return Err(Error::Domain("coincidence counts must be finite and non-negative".into()));
        }
        Ok(Self {
            half_width: (n - 1) / 2,
            counts,
        })
    }

    pub fn size(&self) -> usize {
        2 * self.half_width + 1
    }

    /// Count at row `i`, column `j` (zero-based grid indices).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.counts[i * self.size() + j]
    }
}

/// `1 - Σ_{|i-j|=1} C_ij² / Σ_i C_ii²`.
pub fn crosstalk_visibility(counts: &JointCountsMatrix) -> Result<f64> {
    let n = counts.size();
    let diagonal: f64 = (0..n).map(|i| counts.get(i, i).powi(2)).sum();
    if diagonal == 0.0 {
        return Err(Error::Division("diagonal of the joint counts matrix is zero".into()));
    }
    let neighbours: f64 = (0..n - 1)
        .map(|i| counts.get(i, i + 1).powi(2) + counts.get(i + 1, i).powi(2))
        .sum();
    Ok(1.0 - neighbours / diagonal)
}

/// One `(a, γ)` cell of a Schmidt-number scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanCell {
    pub a: f64,
    pub gamma: f64,
    pub schmidt_number: Option<f64>,
    pub error: Option<String>,
}

/// Schmidt number of the truncated-exponential spectrum over an `(a, γ)` grid.
///
/// Rows are ordered a-major then γ, independent of how cells are scheduled
/// across threads. Divergent cells carry an error message instead of `K`.
pub fn scan_schmidt(a_grid: &[f64], gamma_set: &[f64], eta: f64, window: OamWindow) -> Vec<ScanCell> {
    let cells: Vec<(f64, f64)> = a_grid
        .iter()
        .flat_map(|&a| gamma_set.iter().map(move |&g| (a, g)))
        .collect();
    cells
        .par_iter()
        .map(|&(a, gamma)| {
            let k = SetupParams::from_ratios(gamma, eta)
                .and_then(|p| exponential_spectrum(a, &p, window.min(), window.max()))
                .and_then(|s| schmidt_number(&s));
            match k {
                Ok(k) => ScanCell {
                    a,
                    gamma,
                    schmidt_number: Some(k),
                    error: None,
                },
                Err(e) => ScanCell {
                    a,
                    gamma,
                    schmidt_number: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}
