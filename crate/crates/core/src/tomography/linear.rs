use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::{hermitian_part, min_eigenvalue, mub_bases, project_psd, CountsRecord, DensityMatrix, GeneratorBasis};
use crate::error::{Error, Result};

/// Singular-value ratio below which the setting set is treated as incomplete.
const CONDITION_LIMIT: f64 = 1e-12;

/// Linear-inversion estimate: Hermitian and unit trace, not necessarily PSD.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearEstimate {
    pub d: usize,
    pub matrix: DMatrix<Complex64>,
    pub min_eigenvalue: f64,
    pub physical: bool,
    /// Smallest over largest singular value of the design matrix.
    pub condition: f64,
}

impl LinearEstimate {
    /// The estimate itself, if it is a valid state.
    pub fn to_state(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.d, self.matrix.clone())
    }

    /// Nearest state after clipping negative eigenvalues and renormalizing.
    pub fn projected(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.d, project_psd(&self.matrix)?)
    }
}

/// Solves `p_s = Σ_jk c_jk ⟨a_s|λ_j|a_s⟩⟨b_s|λ_k|b_s⟩` for the expansion
/// `ρ = Σ_jk c_jk λ_j ⊗ λ_k` by SVD least squares, with `p_s = n_s / N`.
///
/// Row `s` of the design matrix is setting `s` of the record, and column
/// `j·d² + k` is the generator pair `(j, k)`.
pub fn linear_reconstruct(counts: &CountsRecord, generators: &GeneratorBasis) -> Result<LinearEstimate> {
    counts.validate()?;
    let d = counts.d;
    if generators.d() != d {
        return Err(Error::Dimension(format!(
            "generators have d = {}, counts have d = {d}",
            generators.d()
        )));
    }
    let mubs = mub_bases(d)?;
    let g = generators.matrices();
    let ng = g.len();
    let local = |v: &DVector<Complex64>| -> Vec<f64> { g.iter().map(|l| (v.adjoint() * l * v)[(0, 0)].re).collect() };
    let mut design = DMatrix::<f64>::zeros(counts.settings.len(), ng * ng);
    for (s, &((ja, ma), (jb, mb))) in counts.settings.iter().enumerate() {
        let a = local(mubs.state(ja, ma));
        let b = local(mubs.state(jb, mb));
        for j in 0..ng {
            for k in 0..ng {
                design[(s, j * ng + k)] = a[j] * b[k];
            }
        }
    }
    if counts.settings.len() < ng * ng {
        return Err(Error::Conditioning(0.0));
    }
    // Normal equations diagonalized symmetrically; the eigenvalues are the
    // squared singular values of the design matrix.
    let normal = design.transpose() * &design;
    let eig = SymmetricEigen::new(normal);
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    let condition = if max > 0.0 && min > 0.0 { (min / max).sqrt() } else { 0.0 };
    if condition < CONDITION_LIMIT {
        return Err(Error::Conditioning(condition));
    }
    let p = DVector::from_vec(counts.frequencies());
    let projected = eig.eigenvectors.transpose() * (design.transpose() * p);
    let scaled = projected.component_div(&eig.eigenvalues);
    let coefficients = &eig.eigenvectors * scaled;

    let dim = d * d;
    let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..ng {
        let right = g
            .iter()
            .enumerate()
            .fold(DMatrix::<Complex64>::zeros(d, d), |acc, (k, l)| {
                acc + l * Complex64::new(coefficients[j * ng + k], 0.0)
            });
        rho += g[j].kronecker(&right);
    }
    let rho = hermitian_part(&rho);
    let trace = rho.trace().re;
    if !(trace.abs() > 0.0) {
        return Err(Error::Degenerate("reconstructed matrix has zero trace".into()));
    }
    let rho = rho / Complex64::new(trace, 0.0);
    let min_eigenvalue = min_eigenvalue(&rho);
    Ok(LinearEstimate {
        d,
        physical: min_eigenvalue >= -super::STATE_TOLERANCE,
        matrix: rho,
        min_eigenvalue,
        condition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tomography::{maximally_entangled, simulate_counts, su_generators, Noise};

    #[test]
    fn noiseless_mes_round_trip() {
        let mubs = mub_bases(3).unwrap();
        let rho = maximally_entangled(3).unwrap();
        let rec = simulate_counts(&rho, &mubs, 1e4, 0, Noise::None).unwrap();
        let est = linear_reconstruct(&rec, &su_generators(3).unwrap()).unwrap();
        assert!((&est.matrix - rho.matrix()).iter().all(|z| z.norm() < 1e-8));
        assert!(est.physical);
    }

    #[test]
    fn maximally_mixed_round_trip() {
        let mubs = mub_bases(3).unwrap();
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        let rec = simulate_counts(&rho, &mubs, 1e4, 0, Noise::None).unwrap();
        let est = linear_reconstruct(&rec, &su_generators(3).unwrap()).unwrap();
        assert!((&est.matrix - rho.matrix()).iter().all(|z| z.norm() < 1e-8));
    }

    #[test]
    fn incomplete_settings_are_ill_conditioned() {
        let mubs = mub_bases(2).unwrap();
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let mut rec = simulate_counts(&rho, &mubs, 100.0, 0, Noise::None).unwrap();
        // Replace every computational-basis state on the signal side by a Fourier one.
        for s in rec.settings.iter_mut() {
            if s.0 .0 == 2 {
                s.0 = (0, s.0 .1);
            }
        }
        assert!(matches!(
            linear_reconstruct(&rec, &su_generators(2).unwrap()),
            Err(Error::Conditioning(_))
        ));
    }
}
