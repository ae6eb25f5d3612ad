use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::spectrum::SpiralSpectrum;

/// `|ψ⟩ ∝ Σ_ℓ C(-ℓ, ℓ) |-ℓ⟩_s |ℓ⟩_i` over `|ℓ| ≤ (d-1)/2`, renormalized.
pub fn theoretical_state(spectrum: &SpiralSpectrum, d: usize) -> Result<DensityMatrix> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::Domain(format!("qudit dimension must be odd and >= 3, got {d}")));
    }
    let half = ((d - 1) / 2) as i32;
    let window = spectrum.window();
    if window.min() > -half || window.max() < half {
        return Err(Error::Window {
            min: -half,
            max: half,
            reason: format!("spectrum only covers [{}, {}]", window.min(), window.max()),
        });
    }
    let mut psi = vec![Complex64::new(0.0, 0.0); d * d];
    for ell in -half..=half {
        let n = (ell + half) as usize;
        let amplitude = spectrum.amplitude(ell).expect("inside window");
        psi[(d - 1 - n) * d + n] = Complex64::new(amplitude, 0.0);
    }
    DensityMatrix::pure(d, &psi)
}

/// `(1/√d) Σ_ℓ |-ℓ⟩_s |ℓ⟩_i`.
pub fn maximally_entangled(d: usize) -> Result<DensityMatrix> {
    let half = d.saturating_sub(1) / 2;
    theoretical_state(&SpiralSpectrum::uniform(crate::spectrum::OamWindow::symmetric(half as u32)), d)
}

/// Haar-random pure state on `d² ` dimensions.
pub fn random_pure_state<R: Rng>(d: usize, rng: &mut R) -> Result<DensityMatrix> {
    let psi: Vec<Complex64> = (0..d * d)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    DensityMatrix::pure(d, &psi)
}

/// Full-rank random state `G G† / Tr(G G†)` from a complex Ginibre matrix.
pub fn random_mixed_state<R: Rng>(d: usize, rng: &mut R) -> Result<DensityMatrix> {
    let dim = d * d;
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    let trace = m.trace();
    DensityMatrix::new(d, super::hermitian_part(&(m / trace)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::OamWindow;

    #[test]
    fn uniform_spectrum_gives_mes() {
        let rho = maximally_entangled(3).unwrap();
        // |1,-1⟩, |0,0⟩, |-1,1⟩ sit at n_s·3 + n_i = 6, 4, 2.
        for (i, j) in [(2, 2), (2, 4), (4, 6), (6, 6)] {
            assert!((rho.matrix()[(i, j)].re - 1.0 / 3.0).abs() < 1e-15);
        }
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert!(rho.matrix()[(0, 0)].norm() == 0.0);
    }

    #[test]
    fn window_must_cover_the_qudit() {
        let s = SpiralSpectrum::uniform(OamWindow::symmetric(1));
        assert!(matches!(theoretical_state(&s, 5), Err(Error::Window { .. })));
        assert!(theoretical_state(&s, 4).is_err());
    }

    #[test]
    fn random_states_are_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let p = random_pure_state(3, &mut rng).unwrap();
        assert!((p.purity() - 1.0).abs() < 1e-12);
        let m = random_mixed_state(3, &mut rng).unwrap();
        assert!(m.eigenvalues()[0] > 0.0);
    }
}
