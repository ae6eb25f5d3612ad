use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// `√(2/d) I` followed by the generalized Gell-Mann matrices; every pair
/// satisfies `Tr(λ_a λ_b) = 2 δ_ab`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorBasis {
    d: usize,
    matrices: Vec<DMatrix<Complex64>>,
}

impl GeneratorBasis {
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn matrices(&self) -> &[DMatrix<Complex64>] {
        &self.matrices
    }

    /// `Tr(λ_a λ_b)` for `a = b`.
    pub fn norm(&self) -> f64 {
        2.0
    }

    /// Real coefficients `c_a = Tr(λ_a H) / 2` of a Hermitian matrix.
    pub fn expand(&self, h: &DMatrix<Complex64>) -> Vec<f64> {
        self.matrices.iter().map(|l| (l * h).trace().re / self.norm()).collect()
    }

    pub fn combine(&self, coefficients: &[f64]) -> DMatrix<Complex64> {
        self.matrices
            .iter()
            .zip(coefficients)
            .fold(DMatrix::zeros(self.d, self.d), |acc, (l, c)| acc + l * Complex64::new(*c, 0.0))
    }
}

pub fn su_generators(d: usize) -> Result<GeneratorBasis> {
    if d < 2 {
        return Err(Error::Domain(format!("generator basis needs d >= 2, got {d}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut matrices = vec![DMatrix::identity(d, d) * Complex64::new((2.0 / d as f64).sqrt(), 0.0)];
    for j in 0..d {
        for k in j + 1..d {
            let mut s = DMatrix::zeros(d, d);
            s[(j, k)] = one;
            s[(k, j)] = one;
            matrices.push(s);
            let mut a = DMatrix::zeros(d, d);
            a[(j, k)] = -i;
            a[(k, j)] = i;
            matrices.push(a);
        }
    }
    for l in 1..d {
        let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut g = DMatrix::zeros(d, d);
        for n in 0..l {
            g[(n, n)] = Complex64::new(scale, 0.0);
        }
        g[(l, l)] = Complex64::new(-(l as f64) * scale, 0.0);
        matrices.push(g);
    }
    Ok(GeneratorBasis { d, matrices })
}
