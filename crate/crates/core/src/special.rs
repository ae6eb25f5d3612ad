//! Integer-order incomplete gamma functions and thin Bessel wrappers.

use crate::error::{Error, Result};

/// `ln(n!)` by direct summation; exact enough for the small orders used here.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln(z^k e^{-z} / k!)`, the Poisson weight, with `z = 0` handled.
fn ln_poisson_term(k: u32, z: f64) -> f64 {
    if z == 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    k as f64 * z.ln() - z - ln_factorial(k)
}

/// Upper incomplete gamma `Γ(n, z) = ∫_z^∞ t^{n-1} e^{-t} dt` for integer `n ≥ 1`.
///
/// Evaluated by the forward recurrence `Γ(k+1, z) = k Γ(k, z) + z^k e^{-z}`
/// starting from `Γ(1, z) = e^{-z}`. Every term is non-negative, so the
/// recurrence accumulates no cancellation.
pub fn upper_incomplete_gamma_int(n: i64, z: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain(format!("incomplete gamma order must be >= 1, got {n}")));
    }
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("incomplete gamma argument must be finite and >= 0, got {z}")));
    }
    let mut value = (-z).exp();
    for k in 1..n {
        let tail = if z == 0.0 { 0.0 } else { (k as f64 * z.ln() - z).exp() };
        value = k as f64 * value + tail;
    }
    Ok(value)
}

/// Regularized upper incomplete gamma `Q(n, z) = Γ(n, z) / (n-1)!`.
///
/// Uses the normalized recurrence `Q(k+1) = Q(k) + z^k e^{-z} / k!`, which
/// stays finite for orders far beyond where `(n-1)!` overflows.
pub fn regularized_upper_gamma_int(n: u32, z: f64) -> f64 {
    debug_assert!(n >= 1 && z >= 0.0);
    (0..n).map(|k| ln_poisson_term(k, z).exp()).sum::<f64>().min(1.0)
}

/// `ln P(n, z)` where `P = 1 - Q` is the regularized lower incomplete gamma.
///
/// For `z < n + 1` the tail series `P = Σ_{k≥n} z^k e^{-z}/k!` is summed
/// directly so that tiny values keep full relative precision; otherwise the
/// complement of [`regularized_upper_gamma_int`] is well conditioned.
pub fn ln_regularized_lower_gamma_int(n: u32, z: f64) -> f64 {
    debug_assert!(n >= 1 && z >= 0.0);
    if z == 0.0 {
        return f64::NEG_INFINITY;
    }
    if z < n as f64 + 1.0 {
        // P = e^{-z} z^n / n! * Σ_j z^j n!/(n+j)!
        let lead = ln_poisson_term(n, z);
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut j = 1u32;
        loop {
            term *= z / (n + j) as f64;
            sum += term;
            if term < sum * 1e-17 || j > 10_000 {
                break;
            }
            j += 1;
        }
        lead + sum.ln()
    } else {
        (1.0 - regularized_upper_gamma_int(n, z)).ln()
    }
}

/// Bessel function of the first kind of integer order.
pub fn bessel_j(order: i32, x: f64) -> f64 {
    match order {
        0 => libm::j0(x),
        1 => libm::j1(x),
        n => libm::jn(n, x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_order_one_is_exponential() {
        assert_eq!(upper_incomplete_gamma_int(1, 0.0).unwrap(), 1.0);
        for z in [0.1, 1.0, 7.5, 40.0] {
            let v = upper_incomplete_gamma_int(1, z).unwrap();
            assert!((v - (-z).exp()).abs() <= 1e-15 * (-z).exp());
        }
    }

    #[test]
    fn gamma_at_zero_is_factorial() {
        assert_eq!(upper_incomplete_gamma_int(5, 0.0).unwrap(), 24.0);
    }

    #[test]
    fn gamma_rejects_bad_order() {
        assert!(matches!(upper_incomplete_gamma_int(0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(upper_incomplete_gamma_int(-3, 1.0), Err(Error::Domain(_))));
        assert!(upper_incomplete_gamma_int(2, -1.0).is_err());
    }

    #[test]
    fn regularized_pair_sums_to_one() {
        for n in [1u32, 3, 13, 40] {
            for z in [0.3, 4.0, 12.7, 55.0] {
                let q = regularized_upper_gamma_int(n, z);
                let p = ln_regularized_lower_gamma_int(n, z).exp();
                assert!((p + q - 1.0).abs() < 1e-13, "n={n} z={z}");
            }
        }
    }

    #[test]
    fn lower_gamma_keeps_relative_precision_when_tiny() {
        // P(21, 0.7) = e^{-0.7} Σ_{k≥21} 0.7^k/k!; leading term dominates.
        let lead = (21.0 * 0.7f64.ln() - 0.7 - ln_factorial(21)).exp();
        let p = ln_regularized_lower_gamma_int(21, 0.7).exp();
        assert!(p > lead && p < lead * 1.04);
    }

    #[test]
    fn bessel_values() {
        assert!((bessel_j(0, 2.0 * std::f64::consts::PI) - 0.220_276_908_539_934_5).abs() < 1e-12);
        assert!(bessel_j(1, 3.831_705_970_207_512).abs() < 1e-12);
    }
}
