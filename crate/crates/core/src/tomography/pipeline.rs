use serde::{Deserialize, Serialize};

use super::{
    cglmp_value, dimensional_witness, fidelity, linear_entropy, maximally_entangled, mub_bases, simulate_counts,
    CountsRecord, DensityMatrix, Noise, Reconstruction, Reconstructor,
};
use crate::error::Result;

/// Simulation parameters for one tomography run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(rename = "N")]
    pub flux: f64,
    pub seed: u64,
    pub noise: Noise,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub counts: CountsRecord,
    pub reconstruction: Reconstruction,
    pub fidelity_to_truth: f64,
    pub fidelity_to_mes: f64,
    /// Linear entropy of the input state, before any measurement.
    pub exact_linear_entropy: f64,
    pub linear_entropy: f64,
    pub cglmp: f64,
    pub witness: bool,
}

/// Simulates counts for `truth`, reconstructs, and evaluates the metrics.
pub fn run_pipeline(
    truth: &DensityMatrix,
    config: &PipelineConfig,
    reconstructor: &dyn Reconstructor,
) -> Result<PipelineReport> {
    let d = truth.d();
    let counts = simulate_counts(truth, &mub_bases(d)?, config.flux, config.seed, config.noise)?;
    reconstruct_counts(truth, counts, reconstructor)
}

/// Reconstructs given counts and evaluates the metrics against `truth`.
pub fn reconstruct_counts(
    truth: &DensityMatrix,
    counts: CountsRecord,
    reconstructor: &dyn Reconstructor,
) -> Result<PipelineReport> {
    let reconstruction = reconstructor.reconstruct(&counts)?;
    let state = &reconstruction.state;
    let fidelity_to_mes = if truth.d() % 2 == 1 {
        fidelity(&maximally_entangled(truth.d())?, state)?
    } else {
        f64::NAN
    };
    Ok(PipelineReport {
        fidelity_to_truth: fidelity(truth, state)?,
        fidelity_to_mes,
        exact_linear_entropy: linear_entropy(truth),
        linear_entropy: linear_entropy(state),
        cglmp: cglmp_value(state),
        witness: dimensional_witness(fidelity_to_mes, truth.d()),
        counts,
        reconstruction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tomography::LinearReconstructor;

    #[test]
    fn noiseless_mes_pipeline() {
        let truth = maximally_entangled(3).unwrap();
        let config = PipelineConfig {
            flux: 1e4,
            seed: 1,
            noise: Noise::None,
        };
        let report = run_pipeline(&truth, &config, &LinearReconstructor).unwrap();
        assert!((report.fidelity_to_mes - 1.0).abs() < 1e-8);
        assert!(report.witness);
        assert!(report.exact_linear_entropy.abs() < 1e-12);
    }
}
