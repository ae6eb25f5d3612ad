use oam_core::shaping::{
    airy_defocus_scan, apply_phase, gaussian_field, propagate_fourier, solve_phase_ode, ExponentialShape, GaussianShape,
    Measure, PhaseProfile, RadialIntensity, RadialShape, ShaperSystem,
};
use proptest::prelude::*;

fn design_grid(extent: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| extent * i as f64 / (n - 1) as f64).collect()
}

fn bookkeeping_defect(input: &RadialIntensity, target: &RadialIntensity, p: &PhaseProfile) -> f64 {
    let total = input.total(Measure::Radial);
    p.grid
        .iter()
        .zip(&p.alpha)
        .map(|(&xi, &a)| {
            (p.energy_constant * target.cumulative_at(a, Measure::Radial) - input.cumulative_at(xi, Measure::Radial)).abs()
                / total
        })
        .fold(0.0, f64::max)
}

fn is_monotone(p: &PhaseProfile) -> bool {
    p.alpha.windows(2).all(|w| w[1] >= w[0])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exponential_targets_conserve_energy(a in -2.0f64..1.0) {
        let input = GaussianShape.table(2001).unwrap();
        let target = ExponentialShape { a }.table(1001).unwrap();
        let p = solve_phase_ode(&input, &target, &design_grid(4.0, 801), Measure::Radial).unwrap();
        prop_assert!(bookkeeping_defect(&input, &target, &p) <= 1e-8);
        prop_assert!(p.residual <= 1e-8);
        prop_assert!(is_monotone(&p));
    }

    #[test]
    fn super_gaussian_targets_conserve_energy(order in 2.0f64..10.0, width in 0.5f64..2.0) {
        let input = GaussianShape.table(2001).unwrap();
        let target = RadialIntensity::sample(|s| (-2.0 * (s / width).powf(order)).exp(), 4.0 * width, 1501).unwrap();
        for measure in [Measure::Radial, Measure::Line] {
            let p = solve_phase_ode(&input, &target, &design_grid(4.0, 601), measure).unwrap();
            prop_assert!(p.residual <= 1e-8);
            prop_assert!(is_monotone(&p));
        }
        let p = solve_phase_ode(&input, &target, &design_grid(4.0, 601), Measure::Radial).unwrap();
        prop_assert!(bookkeeping_defect(&input, &target, &p) <= 1e-8);
    }

    #[test]
    fn identical_profiles_map_to_themselves(width in 0.3f64..3.0) {
        let shape = RadialIntensity::sample(|s| (-2.0 * (s / width).powi(2)).exp(), 5.0 * width, 2001).unwrap();
        let p = solve_phase_ode(&shape, &shape, &design_grid(3.0 * width, 301), Measure::Radial).unwrap();
        for (x, a) in p.grid.iter().zip(&p.alpha) {
            prop_assert!((x - a).abs() <= 1e-9 * width.max(1.0), "{} -> {}", x, a);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn propagation_conserves_energy(a in -1.5f64..0.8, beta in 10.0f64..80.0) {
        let system = ShaperSystem::from_beta(beta, 0.075, 780e-9, 3e-3).unwrap();
        let input = GaussianShape.table(4001).unwrap();
        let target = ExponentialShape { a }.table(1001).unwrap();
        let p = solve_phase_ode(&input, &target, &design_grid(4.0, 1601), Measure::Radial).unwrap();
        let field = gaussian_field(&system, 4.0, 2001).unwrap();
        let out = propagate_fourier(&apply_phase(&field, &p, &system).unwrap(), &system, 0.0).unwrap();
        prop_assert!((out.energy() / field.energy() - 1.0).abs() <= 1e-6);
    }
}

#[test]
fn airy_defocus_regression() {
    let system = ShaperSystem::new(0.075, 780e-9, 3e-3, 200e-6).unwrap();
    let fits = airy_defocus_scan(&system, &[-5e-3, -2e-3, 0.0, 2e-3, 5e-3], 40.0, 8001).unwrap();
    let locked = [
        -0.6814955607341843,
        -0.35254980520190915,
        -0.016113259592285396,
        -0.09663303482424171,
        -0.10379048907591001,
    ];
    for (fit, expected) in fits.iter().zip(locked) {
        assert!((fit.a - expected).abs() < 1e-9, "defocus {}: {} vs {}", fit.defocus, fit.a, expected);
    }
}
