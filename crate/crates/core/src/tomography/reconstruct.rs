use super::{linear_reconstruct, mle_reconstruct, su_generators, CountsRecord, DensityMatrix, MleOptions};
use crate::error::{Error, Result};

/// A reconstructed state plus diagnostics from the method that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub state: DensityMatrix,
    /// Whether the raw estimate was already a valid state.
    pub physical: bool,
    /// Smallest eigenvalue of the raw estimate.
    pub min_eigenvalue: f64,
    pub objective: Option<f64>,
    pub iterations: Option<usize>,
}

/// A tomographic estimator selectable by name.
pub trait Reconstructor: Send + Sync {
    fn name(&self) -> &'static str;

    fn reconstruct(&self, counts: &CountsRecord) -> Result<Reconstruction>;
}

/// Linear inversion followed by eigenvalue clipping.
#[derive(Debug, Default, Clone, Copy)]
pub struct LinearReconstructor;

impl Reconstructor for LinearReconstructor {
    fn name(&self) -> &'static str {
        "linear"
    }

    fn reconstruct(&self, counts: &CountsRecord) -> Result<Reconstruction> {
        let estimate = linear_reconstruct(counts, &su_generators(counts.d)?)?;
        Ok(Reconstruction {
            state: estimate.projected()?,
            physical: estimate.physical,
            min_eigenvalue: estimate.min_eigenvalue,
            objective: None,
            iterations: None,
        })
    }
}

/// Maximum likelihood over physical states.
#[derive(Debug, Default, Clone)]
pub struct MleReconstructor {
    pub options: MleOptions,
}

impl Reconstructor for MleReconstructor {
    fn name(&self) -> &'static str {
        "mle"
    }

    fn reconstruct(&self, counts: &CountsRecord) -> Result<Reconstruction> {
        let fit = mle_reconstruct(counts, &self.options)?;
        let min_eigenvalue = fit.state.eigenvalues()[0];
        Ok(Reconstruction {
            state: fit.state,
            physical: true,
            min_eigenvalue,
            objective: Some(fit.objective),
            iterations: Some(fit.iterations),
        })
    }
}

pub const RECONSTRUCTOR_NAMES: [&str; 2] = ["linear", "mle"];

pub fn reconstructor_by_name(name: &str) -> Result<Box<dyn Reconstructor>> {
    match name {
        "linear" => Ok(Box::new(LinearReconstructor)),
        "mle" => Ok(Box::new(MleReconstructor::default())),
        other => Err(Error::UnknownStrategy {
            kind: "reconstructor",
            name: other.to_string(),
            available: RECONSTRUCTOR_NAMES.join(", "),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_by_name() {
        for name in RECONSTRUCTOR_NAMES {
            assert_eq!(reconstructor_by_name(name).unwrap().name(), name);
        }
        assert!(reconstructor_by_name("bayesian").is_err());
    }
}
