use std::f64::consts::PI;

use coherent_ladder::closed_form::{
    harmonic_detuned, harmonic_mean_quanta, harmonic_populations, kravchuk_amplitudes,
    kravchuk_populations, kravchuk_y,
};
use coherent_ladder::special::poisson_pmf;
use coherent_ladder::{KravchukParameters, MultilevelSystem, PolynomialFamily};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn amplitudes_square_to_binomial(n in 1usize..=50, eps in -2.0f64..2.0, t in 0.0f64..50.0) {
        let params = KravchukParameters::from_detuning(n, eps).unwrap();
        let amps = kravchuk_amplitudes(&params, t);
        let (pops, y) = kravchuk_populations(&params, t);
        for (a, rho) in amps.iter().zip(&pops) {
            prop_assert!((a.norm_sqr() - rho).abs() < 1e-12);
        }
        let total: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let mean: f64 = pops.iter().enumerate().map(|(k, r)| k as f64 * r).sum();
        prop_assert!((mean - n as f64 * y).abs() < 1e-10 * n as f64);
    }

    #[test]
    fn kravchuk_populations_are_periodic(n in 1usize..=50, eps in -2.0f64..2.0, t in 0.0f64..20.0) {
        let params = KravchukParameters::from_detuning(n, eps).unwrap();
        let (a, _) = kravchuk_populations(&params, t);
        let (b, _) = kravchuk_populations(&params, t + 2.0 * PI / params.r);
        for (x, z) in a.iter().zip(&b) {
            prop_assert!((x - z).abs() < 1e-10);
        }
    }

    #[test]
    fn excitation_is_bounded(n in 1usize..=50, eps in -2.0f64..2.0, t in 0.0f64..50.0) {
        let params = KravchukParameters::from_detuning(n, eps).unwrap();
        let y = kravchuk_y(&params, t);
        prop_assert!((0.0..=1.0).contains(&y));
        prop_assert!(y <= 4.0 / (n as f64 * params.r * params.r) + 1e-14);
    }

    #[test]
    fn detuning_sign_does_not_change_populations(n in 1usize..=40, eps in 0.0f64..2.0, t in 0.0f64..30.0) {
        let plus = KravchukParameters::from_detuning(n, eps).unwrap();
        let minus = KravchukParameters::from_detuning(n, -eps).unwrap();
        let (a, _) = kravchuk_populations(&plus, t);
        let (b, _) = kravchuk_populations(&minus, t);
        for (x, z) in a.iter().zip(&b) {
            prop_assert!((x - z).abs() < 1e-12);
        }
    }

    #[test]
    fn parameters_round_trip(n in 1usize..=80, eps in -5.0f64..5.0) {
        let a = KravchukParameters::from_detuning(n, eps).unwrap();
        prop_assert!((a.p + a.q - 1.0).abs() < 1e-15);
        prop_assert!((a.r * a.r * a.p * a.q * n as f64 - 1.0).abs() < 1e-12);
        let b = KravchukParameters::from_probability(n, a.p).unwrap();
        prop_assert!((b.epsilon - eps).abs() < 1e-9 * (1.0 + eps.abs()));
    }

    #[test]
    fn kravchuk_system_matches_dipole_profile(n in 1usize..=60, eps in -2.0f64..2.0) {
        let params = KravchukParameters::from_detuning(n, eps).unwrap();
        let system = MultilevelSystem::kravchuk(&params);
        let nf = n as f64;
        for k in 1..=n {
            let f = (k as f64 * (nf + 1.0 - k as f64) / nf).sqrt();
            prop_assert!((system.dipole(k) - f).abs() < 1e-12);
            prop_assert!((system.detuning(k) - eps).abs() < 1e-12);
        }
        prop_assert_eq!(system.dipole(n + 1), 0.0);
    }

    #[test]
    fn gram_residual_is_small(n in 1usize..=50, p in 0.05f64..0.95) {
        let fam = PolynomialFamily::kravchuk(p, n).unwrap();
        prop_assert!(fam.gram_residual(n, None).unwrap() < 1e-10);
    }

    #[test]
    fn harmonic_detuned_is_poissonian(eps in 0.01f64..3.0, t in 0.0f64..8.0) {
        let lambda = harmonic_mean_quanta(eps, t);
        let pops = harmonic_populations(eps, t, 40);
        let model = poisson_pmf(lambda, 40);
        for (a, b) in pops.iter().zip(&model) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let mirrored = harmonic_detuned(t, -eps, 40).unwrap();
        for (a, b) in mirrored.iter().zip(&model) {
            prop_assert!((a.norm_sqr() - b).abs() < 1e-12);
        }
    }
}

#[test]
fn symmetric_resonance_is_reflection_symmetric() {
    // p = q = 1/2: populations are symmetric in time about the inversion
    for n in [2usize, 7, 20, 33] {
        let params = KravchukParameters::from_detuning(n, 0.0).unwrap();
        assert!((params.p - 0.5).abs() < 1e-15);
        let t_half = PI / params.r;
        for k in 0..=40 {
            let t = t_half * k as f64 / 40.0;
            let (a, _) = kravchuk_populations(&params, t);
            let (b, _) = kravchuk_populations(&params, 2.0 * t_half - t);
            for (x, z) in a.iter().zip(&b) {
                assert!((x - z).abs() < 1e-12);
            }
            let (c, _) = kravchuk_populations(&params, t_half - t);
            for (x, z) in a.iter().zip(c.iter().rev()) {
                assert!((x - z).abs() < 1e-12);
            }
        }
    }
}
