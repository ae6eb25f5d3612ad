//! Two-qudit OAM state tomography.
//!
//! States live on `|n_s⟩ ⊗ |n_i⟩` with `n = ℓ + (d-1)/2`, signal index major:
//! the flat index of `|n_s, n_i⟩` is `d·n_s + n_i`. Measurements are product
//! projections onto mutually unbiased bases; reconstruction is either linear
//! inversion or maximum likelihood over physical states.

mod counts;
mod generators;
mod linear;
mod metrics;
mod mle;
mod mub;
mod optimize;
mod pipeline;
mod reconstruct;
mod state;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use counts::{setting_states, simulate_counts, CountsRecord, Noise, Setting};
pub use generators::{su_generators, GeneratorBasis};
pub use linear::{linear_reconstruct, LinearEstimate};
pub use metrics::{cglmp_value, dimensional_witness, fidelity, linear_entropy, pure_fidelity};
pub use mle::{likelihood, likelihood_gradient, mle_reconstruct, MleFit, MleOptions, MleProblem, MleStart};
pub use mub::{is_prime, mub_bases, MubSet};
pub use optimize::{lbfgs, LbfgsOptions, LbfgsOutcome};
pub use pipeline::{reconstruct_counts, run_pipeline, PipelineConfig, PipelineReport};
pub use reconstruct::{
    reconstructor_by_name, LinearReconstructor, MleReconstructor, Reconstruction, Reconstructor, RECONSTRUCTOR_NAMES,
};
pub use state::{maximally_entangled, random_mixed_state, random_pure_state, theoretical_state};

/// Invariant tolerance for Hermiticity, trace and eigenvalue positivity.
pub const STATE_TOLERANCE: f64 = 1e-10;

/// Description of the flat basis index written into exported files.
pub const BASIS_ORDER: &str = "index = d*n_s + n_i, n = l + (d-1)/2, signal photon major, row-major entries";

/// Validated two-qudit density matrix of size `d² × d²`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    d: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(d: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = d * d;
        if d < 2 || matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Dimension(format!(
                "density matrix for d = {d} must be {dim}x{dim}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let skew = hermitian_defect(&matrix);
        if skew > STATE_TOLERANCE {
            return Err(Error::Domain(format!("matrix is not Hermitian (defect {skew:e})")));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STATE_TOLERANCE || trace.im.abs() > STATE_TOLERANCE {
            return Err(Error::Domain(format!("trace {trace} is not 1")));
        }
        let min = min_eigenvalue(&matrix);
        if min < -STATE_TOLERANCE {
            return Err(Error::Domain(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { d, matrix })
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector of length `d²`.
    pub fn pure(d: usize, psi: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        let norm = v.norm();
        if !(norm > 0.0) {
            return Err(Error::Degenerate("state vector is zero".into()));
        }
        let v = v / Complex64::new(norm, 0.0);
        Self::new(d, &v * v.adjoint())
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        let dim = d * d;
        Self::new(d, DMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0))
    }

    pub fn d(&self) -> usize {
        self.d
    }
    pub fn dim(&self) -> usize {
        self.d * self.d
    }
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut e: Vec<f64> = SymmetricEigen::new(self.matrix.clone()).eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨v|ρ|v⟩` for a vector of length `d²`.
    pub fn expectation(&self, v: &nalgebra::DVector<Complex64>) -> f64 {
        (v.adjoint() * &self.matrix * v)[(0, 0)].re
    }

    pub fn to_json(&self) -> DensityMatrixJson {
        let dim = self.dim();
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..dim).map(|i| (0..dim).map(|j| f(&self.matrix[(i, j)])).collect()).collect()
        };
        DensityMatrixJson {
            schema_version: 1,
            d: self.d,
            basis_order: BASIS_ORDER.to_string(),
            real: rows(|z| z.re),
            imag: rows(|z| z.im),
        }
    }

    pub fn from_json(doc: &DensityMatrixJson) -> Result<Self> {
        let dim = doc.d * doc.d;
        if doc.real.len() != dim || doc.imag.len() != dim {
            return Err(Error::Dimension(format!("expected {dim} rows for d = {}", doc.d)));
        }
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            if doc.real[i].len() != dim || doc.imag[i].len() != dim {
                return Err(Error::Dimension(format!("row {i} must have {dim} entries")));
            }
            for j in 0..dim {
                m[(i, j)] = Complex64::new(doc.real[i][j], doc.imag[i][j]);
            }
        }
        Self::new(doc.d, m)
    }
}

/// JSON layout of an exported density matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DensityMatrixJson {
    pub schema_version: u32,
    pub d: usize,
    pub basis_order: String,
    pub real: Vec<Vec<f64>>,
    pub imag: Vec<Vec<f64>>,
}

pub(crate) fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn hermitian_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

pub(crate) fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    SymmetricEigen::new(hermitian_part(m))
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Nearest unit-trace PSD matrix by clipping negative eigenvalues.
pub(crate) fn project_psd(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let clipped: Vec<f64> = eig.eigenvalues.iter().map(|v| v.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Degenerate("no positive eigenvalues to keep".into()));
    }
    let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        clipped.len(),
        clipped.iter().map(|v| Complex64::new(v / total, 0.0)),
    ));
    Ok(hermitian_part(&(&eig.eigenvectors * diag * eig.eigenvectors.adjoint())))
}
