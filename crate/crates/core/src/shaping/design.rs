use super::{Measure, PhaseProfile, RadialIntensity};
use crate::error::{Error, Result};

/// `A = ∫ I dμ / ∫ Q dμ`.
pub fn energy_constant(input: &RadialIntensity, target: &RadialIntensity, measure: Measure) -> f64 {
    input.total(measure) / target.total(measure)
}

/// Solves `A Q(α) α' = I(ξ)`, `α(0) = 0`, then `φ' = α`, `φ(0) = 0`, on `grid`.
///
/// The ray map comes from inverting the cumulative target energy, which is
/// exact for the piecewise-linear tables, so no step-size control is needed.
/// A target that vanishes at a node strictly inside its support makes `α'`
/// blow up there and is rejected.
pub fn solve_phase_ode(
    input: &RadialIntensity,
    target: &RadialIntensity,
    grid: &[f64],
    measure: Measure,
) -> Result<PhaseProfile> {
    if grid.len() < 2 || grid[0] != 0.0 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("design grid must start at 0 and increase strictly".into()));
    }
    let tv = target.values();
    let last_positive = tv.iter().rposition(|v| *v > 0.0).expect("validated non-zero target");
    if let Some(i) = (1..last_positive).find(|&i| tv[i] == 0.0) {
        return Err(Error::MappingSingularity {
            radius: target.grid()[i],
        });
    }

    let cum_in = input.cumulative(measure);
    let cum_t = target.cumulative(measure);
    let total_in = *cum_in.last().expect("non-empty");
    let total_t = *cum_t.last().expect("non-empty");
    let a = total_in / total_t;

    let mut alpha = Vec::with_capacity(grid.len());
    let mut residual: f64 = 0.0;
    for &xi in grid {
        let e_in = input.cumulative_at_with(&cum_in, xi, measure);
        let level = (e_in / a).min(total_t);
        // Root-finding noise in the saturated tail can step back by an ulp.
        let x = invert_cumulative(target, &cum_t, level, measure).max(alpha.last().copied().unwrap_or(0.0));
        residual = residual.max((a * target.cumulative_at_with(&cum_t, x, measure) - e_in).abs() / total_in);
        alpha.push(x);
    }

    let mut phase = Vec::with_capacity(grid.len());
    phase.push(0.0);
    for i in 1..grid.len() {
        let step = 0.5 * (alpha[i] + alpha[i - 1]) * (grid[i] - grid[i - 1]);
        phase.push(phase[i - 1] + step);
    }

    Ok(PhaseProfile {
        grid: grid.to_vec(),
        alpha,
        phase,
        energy_constant: a,
        residual,
        measure,
        beta: None,
    })
}

/// Smallest `s` with `∫₀^s Q dμ = level`.
fn invert_cumulative(target: &RadialIntensity, cum: &[f64], level: f64, measure: Measure) -> f64 {
    let j = cum.partition_point(|&q| q < level);
    if j == 0 {
        return 0.0;
    }
    let k = j - 1;
    let s = target.grid();
    let (lo, hi) = (s[k], s[j.min(s.len() - 1)]);
    let want = level - cum[k];
    let f = |x: f64| target.partial_cell(k, x, measure) - want;
    let (mut a, mut b) = (lo, hi);
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx > 0.0 {
            b = x;
        } else {
            a = x;
        }
        let density = target.value_at(x)
            * match measure {
                Measure::Line => 1.0,
                Measure::Radial => x,
            };
        let newton = if density > 0.0 { x - fx / density } else { f64::NAN };
        let next = if newton > a && newton < b { newton } else { 0.5 * (a + b) };
        if (next - x).abs() <= 4.0 * f64::EPSILON * hi.max(1.0) || b - a <= 4.0 * f64::EPSILON * hi.max(1.0) {
            return next;
        }
        x = next;
    }
    x
}

/// Closed-form flat-top phase for a unit Gaussian input, evaluated as
/// `-(2/π)(ξ (√π/2) e^ξ + ½ e^{-ξ²} - ½)`.
///
/// This expression grows like `ξ e^ξ` and does not match the numerically
/// solved design; it is kept for comparison only.
pub fn flattop_phase_reference(xi: f64) -> f64 {
    let half_sqrt_pi = 0.5 * std::f64::consts::PI.sqrt();
    -(2.0 / std::f64::consts::PI) * (xi * half_sqrt_pi * xi.exp() + 0.5 * (-xi * xi).exp() - 0.5)
}
