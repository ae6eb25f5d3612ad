use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::{hermitian_part, DensityMatrix};
use crate::error::{Error, Result};

/// Eigenvalues below this multiple of `dim · ε · λ_max` are rounding noise;
/// their square roots would otherwise leak into the fidelity at `~1e-8`.
const NOISE_FLOOR: f64 = 64.0;

fn denoised_roots(values: &DVector<f64>) -> Vec<f64> {
    let max = values.iter().copied().fold(0.0, f64::max);
    let floor = NOISE_FLOOR * values.len() as f64 * f64::EPSILON * max;
    values.iter().map(|&v| if v > floor { v.sqrt() } else { 0.0 }).collect()
}

fn sqrt_psd(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let roots = DVector::from_iterator(
        eig.eigenvalues.len(),
        denoised_roots(&eig.eigenvalues).into_iter().map(|v| Complex64::new(v, 0.0)),
    );
    &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint()
}

/// Uhlmann fidelity `[Tr √(√ρ σ √ρ)]²`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Domain(format!(
            "fidelity needs matching dimensions, got {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let root = sqrt_psd(rho.matrix());
    let inner = &root * sigma.matrix() * &root;
    let eig = SymmetricEigen::new(hermitian_part(&inner));
    let trace: f64 = denoised_roots(&eig.eigenvalues).iter().sum();
    Ok(trace * trace)
}

/// `⟨ψ|σ|ψ⟩` for a normalized `ψ`.
pub fn pure_fidelity(psi: &DVector<Complex64>, sigma: &DensityMatrix) -> Result<f64> {
    if psi.len() != sigma.dim() {
        return Err(Error::Domain(format!(
            "state vector of length {} against a {}-dimensional state",
            psi.len(),
            sigma.dim()
        )));
    }
    Ok(sigma.expectation(psi))
}

/// `1 - Tr(ρ²)`.
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    1.0 - rho.purity()
}

/// True iff `F > (d-1)/d`.
pub fn dimensional_witness(fidelity: f64, d: usize) -> bool {
    fidelity > (d as f64 - 1.0) / d as f64
}

/// CGLMP expression `I_d` with the optimal two-setting Fourier measurements
/// for the anti-correlated state `Σ_ℓ |-ℓ⟩_s |ℓ⟩_i`.
///
/// Signal outcome `k` of setting `a` is `Σ_n e^{2πi (d-1-n)(k+α_a)/d} |n⟩ / √d`
/// (the reversed index undoes the anti-correlation), idler outcome `l` of
/// setting `b` is `Σ_n e^{-2πi n(l-β_b)/d} |n⟩ / √d`, with `α = (0, 1/2)` and
/// `β = (1/4, -1/4)`.
pub fn cglmp_value(rho: &DensityMatrix) -> f64 {
    let d = rho.d();
    let df = d as f64;
    let norm = 1.0 / df.sqrt();
    let alice = |a: usize, k: usize| -> DVector<Complex64> {
        let alpha = [0.0, 0.5][a];
        DVector::from_fn(d, |n, _| {
            Complex64::from_polar(norm, TAU / df * (d - 1 - n) as f64 * (k as f64 + alpha))
        })
    };
    let bob = |b: usize, l: usize| -> DVector<Complex64> {
        let beta = [0.25, -0.25][b];
        DVector::from_fn(d, |n, _| Complex64::from_polar(norm, -TAU / df * n as f64 * (l as f64 - beta)))
    };
    let mut joint = vec![vec![vec![vec![0.0; d]; d]; 2]; 2];
    for (a, plane) in joint.iter_mut().enumerate() {
        for (b, table) in plane.iter_mut().enumerate() {
            for (k, row) in table.iter_mut().enumerate() {
                for (l, p) in row.iter_mut().enumerate() {
                    *p = rho.expectation(&alice(a, k).kronecker(&bob(b, l)));
                }
            }
        }
    }
    let m = |x: i64| x.rem_euclid(d as i64) as usize;
    // P(A_a = B_b + k)
    let ab = |a: usize, b: usize, k: i64| (0..d).map(|l| joint[a][b][m(l as i64 + k)][l]).sum::<f64>();
    // P(B_b = A_a + k)
    let ba = |b: usize, a: usize, k: i64| (0..d).map(|j| joint[a][b][j][m(j as i64 + k)]).sum::<f64>();
    (0..d / 2)
        .map(|k| {
            let k = k as i64;
            let weight = 1.0 - 2.0 * k as f64 / (df - 1.0);
            weight
                * (ab(0, 0, k) + ba(0, 1, k + 1) + ab(1, 1, k) + ba(1, 0, k)
                    - ab(0, 0, -k - 1)
                    - ba(0, 1, -k)
                    - ab(1, 1, -k - 1)
                    - ba(1, 0, -k - 1))
        })
        .sum()
}
