use std::f64::consts::TAU;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub fn is_prime(d: usize) -> bool {
    d >= 2 && (2..).take_while(|k| k * k <= d).all(|k| d % k != 0)
}

/// Complete set of `d + 1` mutually unbiased bases in prime dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct MubSet {
    d: usize,
    bases: Vec<Vec<DVector<Complex64>>>,
}

impl MubSet {
    pub fn d(&self) -> usize {
        self.d
    }

    /// All `d + 1` groups; group `d` is the computational basis.
    pub fn bases(&self) -> &[Vec<DVector<Complex64>>] {
        &self.bases
    }

    /// State `m` of group `j`.
    pub fn state(&self, j: usize, m: usize) -> &DVector<Complex64> {
        &self.bases[j][m]
    }
}

/// Groups `j < d` hold `(1/√d) Σ_n ω^{j n² + n m} |n⟩` with `ω = e^{2πi/d}`;
/// group `d` is the computational basis.
///
/// For `d = 2` the quadratic term is degenerate (`n² = n`), so the phase
/// `i^{j n²} (-1)^{n m}` is used, which gives the eigenbases of σ_x and σ_y.
pub fn mub_bases(d: usize) -> Result<MubSet> {
    if !is_prime(d) {
        return Err(Error::Domain(format!("mutually unbiased bases need a prime dimension, got {d}")));
    }
    let norm = 1.0 / (d as f64).sqrt();
    let mut bases: Vec<Vec<DVector<Complex64>>> = (0..d)
        .map(|j| {
            (0..d)
                .map(|m| {
                    DVector::from_iterator(
                        d,
                        (0..d).map(|n| {
                            let turns = if d == 2 {
                                (j * n * n) as f64 / 4.0 + (n * m) as f64 / 2.0
                            } else {
                                ((j * n * n + n * m) % d) as f64 / d as f64
                            };
                            Complex64::from_polar(norm, TAU * turns)
                        }),
                    )
                })
                .collect()
        })
        .collect();
    bases.push(
        (0..d)
            .map(|m| DVector::from_fn(d, |n, _| if n == m { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }))
            .collect(),
    );
    Ok(MubSet { d, bases })
}
