use oam_core::special::{ln_regularized_lower_gamma_int, upper_incomplete_gamma_int};
use oam_core::spectrum::{
    exponential_spectrum, gaussian_spectrum, numerical_spectrum, schmidt_number, GaussianPump, OamWindow,
    SetupParams, SpiralSpectrum, TabulatedPump, TruncatedExponentialPump,
};
use proptest::prelude::*;

fn max_diff(a: &SpiralSpectrum, b: &SpiralSpectrum) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn valid_tuple() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.5f64..5.0, 0.1f64..1.0, 0.0f64..1.0).prop_map(|(g, e, t)| {
        let hi = 1.0f64.min(2.0 * g * g + 2.0 * e * e - 0.1);
        (g, e, -3.0 + t * (hi + 3.0))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncated_exponential_quadrature_matches_closed_form((gamma, eta, a) in valid_tuple()) {
        let p = SetupParams::from_ratios(gamma, eta).unwrap();
        let closed = exponential_spectrum(a, &p, -20, 20).unwrap();
        let quad = numerical_spectrum(&TruncatedExponentialPump { a }, &p, -20, 20).unwrap();
        prop_assert!(max_diff(&closed, &quad) < 1e-8);
    }

    #[test]
    fn gaussian_quadrature_matches_closed_form(gamma in 0.5f64..5.0, eta in 0.1f64..1.0) {
        let p = SetupParams::from_ratios(gamma, eta).unwrap();
        let closed = gaussian_spectrum(&p, -20, 20).unwrap();
        let quad = numerical_spectrum(&GaussianPump, &p, -20, 20).unwrap();
        prop_assert!(max_diff(&closed, &quad) < 1e-8);
    }

    #[test]
    fn spectra_are_normalized_and_even((gamma, eta, a) in valid_tuple()) {
        let p = SetupParams::from_ratios(gamma, eta).unwrap();
        let s = exponential_spectrum(a, &p, -15, 15).unwrap();
        prop_assert!((s.total_probability() - 1.0).abs() <= 1e-12);
        for ell in 1..=15 {
            prop_assert_eq!(s.amplitude(ell), s.amplitude(-ell));
        }
        let k = schmidt_number(&s).unwrap();
        prop_assert!((1.0..=31.0 + 1e-9).contains(&k));
    }

    #[test]
    fn gamma_recurrence(n in 1i64..=32, z in 0.0f64..100.0) {
        let lhs = upper_incomplete_gamma_int(n + 1, z).unwrap();
        let rhs = n as f64 * upper_incomplete_gamma_int(n, z).unwrap() + z.powi(n as i32) * (-z).exp();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(f64::MIN_POSITIVE));
    }

    #[test]
    fn flat_first_factor_at_the_optimum(gamma in 0.5f64..5.0, eta in 0.1f64..1.0) {
        // a = 2η² makes the geometric factor 1; only the gamma bracket is left.
        let p = SetupParams::from_ratios(gamma, eta).unwrap();
        let a = 2.0 * eta * eta;
        let s = exponential_spectrum(a, &p, -10, 10).unwrap();
        let z = 2.0 * gamma * gamma;
        let p0 = ln_regularized_lower_gamma_int(1, z);
        for ell in 1..=10u32 {
            let ratio = s.amplitude(ell as i32).unwrap() / s.amplitude(0).unwrap();
            let expected = (ln_regularized_lower_gamma_int(ell + 1, z) - p0).exp();
            prop_assert!((ratio / expected - 1.0).abs() < 1e-10, "ell {}: {} vs {}", ell, ratio, expected);
        }
    }
}

#[test]
fn uniform_spectrum_saturates_schmidt_bound() {
    let s = SpiralSpectrum::uniform(OamWindow::symmetric(12));
    assert!((schmidt_number(&s).unwrap() - 25.0).abs() < 1e-9);
}

#[test]
fn tabulated_gaussian_tracks_closed_form() {
    let p = SetupParams::from_ratios(2.4, 0.31).unwrap();
    let table = TabulatedPump::sample(|s| (-s * s).exp(), 8.0, 4096).unwrap();
    let quad = numerical_spectrum(&table, &p, -20, 20).unwrap();
    let closed = gaussian_spectrum(&p, -20, 20).unwrap();
    // Linear interpolation error on a 4096-point grid over 8 waists is ~h²/8.
    assert!(max_diff(&closed, &quad) < 1e-6, "{}", max_diff(&closed, &quad));
}

#[test]
fn exponential_at_a_019_matches_quadrature() {
    let p = SetupParams::from_ratios(2.4, 0.31).unwrap();
    let closed = exponential_spectrum(0.19, &p, -20, 20).unwrap();
    let quad = numerical_spectrum(&TruncatedExponentialPump { a: 0.19 }, &p, -20, 20).unwrap();
    assert!(max_diff(&closed, &quad) < 1e-8);
}

#[test]
fn incomplete_gamma_oracle() {
    // ∫_{2.5}^∞ t³ e^{-t} dt = e^{-2.5} (2.5³ + 3·2.5² + 6·2.5 + 6)
    let v = upper_incomplete_gamma_int(4, 2.5).unwrap();
    assert!((v - 4.545456798798395).abs() < 1e-12);
}
