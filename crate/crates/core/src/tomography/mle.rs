use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;

use super::counts::product_state;
use super::{
    hermitian_part, linear_reconstruct, lbfgs, mub_bases, su_generators, CountsRecord, DensityMatrix, LbfgsOptions,
};
use crate::error::{Error, Result};

/// Weight of the maximally mixed state blended into a starting point so that
/// its Cholesky factor exists.
const START_BLEND: f64 = 1e-8;

/// Starting point of the likelihood search.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum MleStart {
    /// Linear inversion clipped to the PSD cone.
    #[default]
    Linear,
    /// The maximally mixed state.
    Identity,
    State(DensityMatrix),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MleOptions {
    pub start: MleStart,
    pub optimizer: LbfgsOptions,
}

/// Likelihood over the physical states `ρ = L L† / Tr(L L†)`.
///
/// `L` is lower triangular with a real diagonal; the `d⁴` real parameters are
/// the diagonal followed by the real and imaginary parts of the strictly
/// lower entries in row-major order.
#[derive(Debug, Clone)]
pub struct MleProblem {
    d: usize,
    /// Product measurement vectors as columns, one per setting.
    vectors: DMatrix<Complex64>,
    counts: Vec<f64>,
    flux: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MleFit {
    pub state: DensityMatrix,
    pub objective: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
}

impl MleProblem {
    pub fn new(counts: &CountsRecord) -> Result<Self> {
        counts.validate()?;
        let mubs = mub_bases(counts.d)?;
        let dim = counts.d * counts.d;
        let mut vectors = DMatrix::zeros(dim, counts.settings.len());
        for (s, setting) in counts.settings.iter().enumerate() {
            vectors.set_column(s, &product_state(&mubs, setting));
        }
        Ok(Self {
            d: counts.d,
            vectors,
            counts: counts.counts.clone(),
            flux: counts.total_pair_flux,
        })
    }

    pub fn parameter_count(&self) -> usize {
        self.dim() * self.dim()
    }

    fn dim(&self) -> usize {
        self.d * self.d
    }

    pub fn lower_from_params(&self, t: &[f64]) -> DMatrix<Complex64> {
        let dim = self.dim();
        let mut l = DMatrix::zeros(dim, dim);
        for a in 0..dim {
            l[(a, a)] = Complex64::new(t[a], 0.0);
        }
        let mut k = dim;
        for a in 0..dim {
            for b in 0..a {
                l[(a, b)] = Complex64::new(t[k], t[k + 1]);
                k += 2;
            }
        }
        l
    }

    pub fn params_from_lower(&self, l: &DMatrix<Complex64>) -> Vec<f64> {
        let dim = self.dim();
        let mut t: Vec<f64> = (0..dim).map(|a| l[(a, a)].re).collect();
        for a in 0..dim {
            for b in 0..a {
                t.push(l[(a, b)].re);
                t.push(l[(a, b)].im);
            }
        }
        t
    }

    pub fn params_from_state(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        if rho.d() != self.d {
            return Err(Error::Dimension(format!("start state has d = {}, counts have d = {}", rho.d(), self.d)));
        }
        let dim = self.dim();
        let blended = rho.matrix() * Complex64::new(1.0 - START_BLEND, 0.0)
            + DMatrix::<Complex64>::identity(dim, dim) * Complex64::new(START_BLEND / dim as f64, 0.0);
        let chol = Cholesky::new(hermitian_part(&blended))
            .ok_or_else(|| Error::Domain("start state is not positive definite".into()))?;
        Ok(self.params_from_lower(&chol.l()))
    }

    pub fn state_from_params(&self, t: &[f64]) -> Result<DensityMatrix> {
        let l = self.lower_from_params(t);
        let m = &l * l.adjoint();
        let trace = m.trace().re;
        if !(trace > 0.0) {
            return Err(Error::Degenerate("triangular factor is zero".into()));
        }
        DensityMatrix::new(self.d, hermitian_part(&(m / Complex64::new(trace, 0.0))))
    }

    /// Predicted probabilities `⟨ψ_s|ρ|ψ_s⟩`, the factor, and `Tr(L L†)`.
    fn probabilities(&self, t: &[f64]) -> (Vec<f64>, DMatrix<Complex64>, f64) {
        let l = self.lower_from_params(t);
        let tau: f64 = l.iter().map(|z| z.norm_sqr()).sum();
        let u = l.adjoint() * &self.vectors;
        let p = u.column_iter().map(|c| c.norm_squared() / tau).collect();
        (p, l, tau)
    }

    /// `Σ_s [N p_s - n_s]² / (2 N p_s)`.
    pub fn value(&self, t: &[f64]) -> f64 {
        let (p, _, tau) = self.probabilities(t);
        if !(tau > 0.0) {
            return f64::INFINITY;
        }
        p.iter().zip(&self.counts).map(|(&p, &n)| self.term(p, n)).sum()
    }

    fn term(&self, p: f64, n: f64) -> f64 {
        let expected = self.flux * p;
        if n == 0.0 {
            0.5 * expected
        } else if expected > 0.0 {
            (expected - n).powi(2) / (2.0 * expected)
        } else {
            f64::INFINITY
        }
    }

    /// Value and analytic gradient with respect to the parameters.
    ///
    /// With `g_s = ∂f/∂p_s` and `B = (Σ_s g_s ψ_s ψ_s† - (Σ_s g_s p_s) I) / τ`,
    /// `df = 2 Re Σ_ab conj((B L)_ab) dL_ab`.
    pub fn value_and_gradient(&self, t: &[f64]) -> (f64, Vec<f64>) {
        let (p, l, tau) = self.probabilities(t);
        let dim = self.dim();
        if !(tau > 0.0) {
            return (f64::INFINITY, vec![0.0; t.len()]);
        }
        let mut value = 0.0;
        let mut weights = Vec::with_capacity(p.len());
        let mut shift = 0.0;
        for (&p, &n) in p.iter().zip(&self.counts) {
            value += self.term(p, n);
            let g = if n == 0.0 { 0.5 * self.flux } else { 0.5 * self.flux - n * n / (2.0 * self.flux * p * p) };
            shift += g * p;
            weights.push(g);
        }
        if !value.is_finite() {
            return (value, vec![0.0; t.len()]);
        }
        let mut weighted = self.vectors.clone();
        for (mut col, g) in weighted.column_iter_mut().zip(&weights) {
            col *= Complex64::new(*g, 0.0);
        }
        let mut b = weighted * self.vectors.adjoint();
        for a in 0..dim {
            b[(a, a)] -= Complex64::new(shift, 0.0);
        }
        let k = (b * l) / Complex64::new(tau, 0.0);
        let mut grad: Vec<f64> = (0..dim).map(|a| 2.0 * k[(a, a)].re).collect();
        for a in 0..dim {
            for c in 0..a {
                grad.push(2.0 * k[(a, c)].re);
                grad.push(2.0 * k[(a, c)].im);
            }
        }
        (value, grad)
    }

    fn start(&self, start: &MleStart, counts: &CountsRecord) -> Result<Vec<f64>> {
        match start {
            MleStart::Linear => {
                let estimate = linear_reconstruct(counts, &su_generators(self.d)?)?;
                self.params_from_state(&estimate.projected()?)
            }
            MleStart::Identity => self.params_from_state(&DensityMatrix::maximally_mixed(self.d)?),
            MleStart::State(rho) => self.params_from_state(rho),
        }
    }
}

/// Likelihood objective of `counts` at parameters `t`.
pub fn likelihood(problem: &MleProblem, t: &[f64]) -> f64 {
    problem.value(t)
}

/// Analytic gradient of [`likelihood`].
pub fn likelihood_gradient(problem: &MleProblem, t: &[f64]) -> Vec<f64> {
    problem.value_and_gradient(t).1
}

/// Maximum-likelihood state, starting from `options.start`.
pub fn mle_reconstruct(counts: &CountsRecord, options: &MleOptions) -> Result<MleFit> {
    let problem = MleProblem::new(counts)?;
    let x0 = problem.start(&options.start, counts)?;
    let outcome = lbfgs(|t| problem.value_and_gradient(t), x0, options.optimizer);
    if !outcome.converged {
        return Err(Error::Convergence {
            iterations: outcome.iterations,
            objective: outcome.value,
            last: outcome.x,
        });
    }
    Ok(MleFit {
        state: problem.state_from_params(&outcome.x)?,
        objective: outcome.value,
        iterations: outcome.iterations,
        gradient_norm: outcome.gradient_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tomography::{fidelity, maximally_entangled, random_mixed_state, simulate_counts, Noise};
    use rand::{Rng, SeedableRng};

    fn problem(d: usize, seed: u64) -> (MleProblem, CountsRecord) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let rho = random_mixed_state(d, &mut rng).unwrap();
        let rec = simulate_counts(&rho, &mub_bases(d).unwrap(), 1e3, seed, Noise::Poisson).unwrap();
        (MleProblem::new(&rec).unwrap(), rec)
    }

    #[test]
    fn parameter_layout_round_trip() {
        let (p, _) = problem(2, 3);
        let t: Vec<f64> = (0..p.parameter_count()).map(|i| i as f64 * 0.1 + 1.0).collect();
        assert_eq!(p.params_from_lower(&p.lower_from_params(&t)), t);
        assert_eq!(p.parameter_count(), 16);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let (p, _) = problem(2, 5);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let t: Vec<f64> = (0..p.parameter_count()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (_, g) = p.value_and_gradient(&t);
        for i in 0..t.len() {
            let h = 1e-6;
            let mut up = t.clone();
            let mut down = t.clone();
            up[i] += h;
            down[i] -= h;
            let fd = (p.value(&up) - p.value(&down)) / (2.0 * h);
            assert!((fd - g[i]).abs() <= 1e-5 * g[i].abs().max(1.0), "{i}: {fd} vs {}", g[i]);
        }
    }

    #[test]
    fn noiseless_mes_is_recovered() {
        let rho = maximally_entangled(3).unwrap();
        let rec = simulate_counts(&rho, &mub_bases(3).unwrap(), 1e4, 0, Noise::None).unwrap();
        let fit = mle_reconstruct(&rec, &MleOptions::default()).unwrap();
        assert!(fidelity(&rho, &fit.state).unwrap() >= 0.9999);
    }

    #[test]
    fn iteration_cap_is_a_convergence_error() {
        let (_, rec) = problem(2, 9);
        let options = MleOptions {
            start: MleStart::Identity,
            optimizer: LbfgsOptions {
                max_iterations: 1,
                relative_decrease: 0.0,
                gradient_norm: 0.0,
                ..LbfgsOptions::default()
            },
        };
        match mle_reconstruct(&rec, &options) {
            Err(Error::Convergence { last, objective, .. }) => {
                assert_eq!(last.len(), 16);
                assert!(objective.is_finite());
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }
}
