use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::{is_prime, DensityMatrix, MubSet};
use crate::error::{Error, Result};

/// Poisson means below this are sampled as Bernoulli draws.
const TINY_MEAN: f64 = 1e-6;

/// `((j_A, m_A), (j_B, m_B))`: MUB group and state index for signal and idler.
pub type Setting = ((usize, usize), (usize, usize));

/// Count statistics applied to expected coincidences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Noise {
    #[default]
    None,
    Poisson,
}

/// The `d²` single-photon states measured on each side: the first `d - 1`
/// states of every Fourier group followed by the whole computational basis.
/// Their projectors are linearly independent and span the Hermitian matrices.
pub fn setting_states(d: usize) -> Vec<(usize, usize)> {
    (0..d)
        .flat_map(|j| (0..d - 1).map(move |m| (j, m)))
        .chain((0..d).map(|m| (d, m)))
        .collect()
}

pub(crate) fn all_settings(d: usize) -> Vec<Setting> {
    let side = setting_states(d);
    side.iter().flat_map(|&a| side.iter().map(move |&b| (a, b))).collect()
}

pub(crate) fn product_state(mubs: &MubSet, setting: &Setting) -> DVector<Complex64> {
    let ((ja, ma), (jb, mb)) = *setting;
    mubs.state(ja, ma).kronecker(mubs.state(jb, mb))
}

/// Coincidence counts over a list of product settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CountsRecord {
    pub schema_version: u32,
    pub d: usize,
    pub settings: Vec<Setting>,
    /// Integer-valued under Poisson noise; exact expectations otherwise.
    pub counts: Vec<f64>,
    #[serde(rename = "N")]
    pub total_pair_flux: f64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub noise: Noise,
}

impl CountsRecord {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != 1 {
            return Err(Error::Domain(format!("unsupported counts schemaVersion {}", self.schema_version)));
        }
        if !is_prime(self.d) {
            return Err(Error::Domain(format!("counts dimension must be prime, got {}", self.d)));
        }
        if self.settings.len() != self.counts.len() {
            return Err(Error::Dimension(format!(
                "{} settings but {} counts",
                self.settings.len(),
                self.counts.len()
            )));
        }
        if !(self.total_pair_flux > 0.0) || !self.total_pair_flux.is_finite() {
            return Err(Error::Domain(format!("N must be finite and > 0, got {}", self.total_pair_flux)));
        }
        let d = self.d;
        if let Some(s) = self.settings.iter().find(|((ja, ma), (jb, mb))| *ja > d || *jb > d || *ma >= d || *mb >= d) {
            return Err(Error::Domain(format!("setting {s:?} is out of range for d = {d}")));
        }
        if let Some(c) = self.counts.iter().find(|c| !(**c >= 0.0) || !c.is_finite()) {
            return Err(Error::Domain(format!("count {c} is not a finite non-negative number")));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: Self = serde_json::from_str(text)?;
        record.validate()?;
        Ok(record)
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.counts.iter().map(|n| n / self.total_pair_flux).collect()
    }
}

/// Expected coincidences `N ⟨a⊗b|ρ|a⊗b⟩` over the full `d⁴` setting set,
/// optionally Poisson-sampled from a ChaCha8 stream seeded with `seed`.
pub fn simulate_counts(rho: &DensityMatrix, mubs: &MubSet, n: f64, seed: u64, noise: Noise) -> Result<CountsRecord> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Domain(format!("N must be finite and > 0, got {n}")));
    }
    if rho.d() != mubs.d() {
        return Err(Error::Dimension(format!("state has d = {}, bases have d = {}", rho.d(), mubs.d())));
    }
    let settings = all_settings(mubs.d());
    let expected: Vec<f64> = settings
        .iter()
        .map(|s| n * rho.expectation(&product_state(mubs, s)).max(0.0))
        .collect();
    let counts = match noise {
        Noise::None => expected,
        Noise::Poisson => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            expected
                .iter()
                .map(|&lambda| {
                    if lambda >= TINY_MEAN {
                        Poisson::new(lambda).map(|p| p.sample(&mut rng)).map_err(|e| Error::Domain(e.to_string()))
                    } else if lambda > 0.0 {
                        // The library sampler returns -1 once e^-λ rounds to 1;
                        // P(X ≥ 2) < λ² here, so a single Bernoulli draw suffices.
                        let u: f64 = rng.gen();
                        Ok(if u < -(-lambda).exp_m1() { 1.0 } else { 0.0 })
                    } else {
                        Ok(0.0)
                    }
                })
                .collect::<Result<Vec<f64>>>()?
        }
    };
    Ok(CountsRecord {
        schema_version: 1,
        d: mubs.d(),
        settings,
        counts,
        total_pair_flux: n,
        seed: Some(seed),
        noise,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tomography::{maximally_entangled, mub_bases};

    #[test]
    fn setting_set_size() {
        for d in [2, 3, 5] {
            assert_eq!(setting_states(d).len(), d * d);
            assert_eq!(all_settings(d).len(), d.pow(4));
        }
    }

    #[test]
    fn complete_basis_pair_sums_to_flux() {
        let mubs = mub_bases(3).unwrap();
        let rho = maximally_entangled(3).unwrap();
        for j in 0..=3 {
            let mut total = 0.0;
            for ma in 0..3 {
                for mb in 0..3 {
                    total += 1e4 * rho.expectation(&product_state(&mubs, &((j, ma), (j, mb))));
                }
            }
            assert!((total - 1e4).abs() < 1e-9);
        }
    }

    #[test]
    fn mixed_state_is_isotropic() {
        let mubs = mub_bases(3).unwrap();
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        let rec = simulate_counts(&rho, &mubs, 900.0, 0, Noise::None).unwrap();
        assert!(rec.counts.iter().all(|c| (c - 100.0).abs() < 1e-9));
    }

    #[test]
    fn poisson_counts_are_reproducible() {
        let mubs = mub_bases(3).unwrap();
        let rho = maximally_entangled(3).unwrap();
        let a = simulate_counts(&rho, &mubs, 1e4, 42, Noise::Poisson).unwrap();
        let b = simulate_counts(&rho, &mubs, 1e4, 42, Noise::Poisson).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.counts.iter().all(|c| c.fract() == 0.0));
        let c = simulate_counts(&rho, &mubs, 1e4, 43, Noise::Poisson).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn tiny_means_never_go_negative() {
        let mubs = mub_bases(5).unwrap();
        let rho = maximally_entangled(5).unwrap();
        for seed in 0..20 {
            let rec = simulate_counts(&rho, &mubs, 2e4, seed, Noise::Poisson).unwrap();
            rec.validate().unwrap();
        }
    }

    #[test]
    fn invalid_inputs() {
        let mubs = mub_bases(3).unwrap();
        let rho = maximally_entangled(3).unwrap();
        assert!(simulate_counts(&rho, &mubs, 0.0, 0, Noise::None).is_err());
        assert!(simulate_counts(&rho, &mub_bases(5).unwrap(), 1.0, 0, Noise::None).is_err());
        let mut rec = simulate_counts(&rho, &mubs, 1.0, 0, Noise::None).unwrap();
        rec.counts.pop();
        assert!(rec.validate().is_err());
    }
}
