mod common;

use common::sampling::{random_channel, random_energy, random_potential};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use relsep::phase_analytic::unwrap_taus;
use relsep::{
    energy_for_wavenumber, s_matrix_analytic, s_matrix_m1, s_matrix_numeric, solve_coefficients,
    Basis, CRule, ChannelConfig, SeparablePotential,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn analytic_and_numeric_are_unitary_and_agree(seed in any::<u64>(), m in 1usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let cfg = random_channel(&mut rng);
        let eps = random_energy(&mut rng, &cfg);
        let v = random_potential(&mut rng, m);
        let analytic = s_matrix_analytic(eps, &v, &cfg).unwrap();
        prop_assert!((analytic.s_value.norm() - 1.0).abs() < 1e-10);
        for n in [m, m + 3, m + 10] {
            let numeric = s_matrix_numeric(eps, &v, n, &cfg).unwrap();
            prop_assert!((numeric.s_value.norm() - 1.0).abs() < 1e-10);
            prop_assert!((numeric.s_value - analytic.s_value).norm() < 1e-8,
                "N={} analytic {} numeric {}", n, analytic.s_value, numeric.s_value);
        }
    }

    #[test]
    fn zero_padding_nests(seed in any::<u64>(), m in 1usize..=2) {
        let mut rng = StdRng::seed_from_u64(seed);
        let cfg = random_channel(&mut rng);
        let eps = random_energy(&mut rng, &cfg);
        let v = random_potential(&mut rng, m);
        let small = s_matrix_analytic(eps, &v, &cfg).unwrap();
        let padded = s_matrix_analytic(eps, &v.padded(m + 1), &cfg).unwrap();
        prop_assert!((small.s_value - padded.s_value).norm() < 1e-10);
    }

    #[test]
    fn four_term_potential_is_truncation_independent(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let cfg = random_channel(&mut rng);
        let eps = random_energy(&mut rng, &cfg);
        let v = random_potential(&mut rng, 4);
        let s6 = s_matrix_numeric(eps, &v, 6, &cfg).unwrap().s_value;
        let s12 = s_matrix_numeric(eps, &v, 12, &cfg).unwrap().s_value;
        prop_assert!((s6 - s12).norm() < 1e-8);
    }

    #[test]
    fn zero_potential_gives_unit_s(seed in any::<u64>(), m in 1usize..=3, n_extra in 0usize..10) {
        let mut rng = StdRng::seed_from_u64(seed);
        let cfg = random_channel(&mut rng);
        let eps = random_energy(&mut rng, &cfg);
        let v = SeparablePotential::zero(m);
        prop_assert!((s_matrix_analytic(eps, &v, &cfg).unwrap().s_value - 1.0).norm() < 1e-10);
        prop_assert!((s_matrix_numeric(eps, &v, m + n_extra, &cfg).unwrap().s_value - 1.0).norm() < 1e-10);
    }

    #[test]
    fn interior_solution_satisfies_wave_equation(seed in any::<u64>(), m in 1usize..=4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let cfg = random_channel(&mut rng);
        let eps = random_energy(&mut rng, &cfg);
        let v = random_potential(&mut rng, m);
        let sol = solve_coefficients(eps, &v, m + 4, &cfg).unwrap();
        prop_assert!(sol.residual < 1e-8);
    }
}

fn resonance_channel() -> ChannelConfig {
    ChannelConfig::new(Basis::Laguerre, 2, 1.0, 0.1, CRule::Balance).unwrap()
}

/// Attractive one-term coupling just short of binding a state at threshold.
const RESONANT_V: f64 = -0.62;

fn grid(cfg: &ChannelConfig, points: usize) -> Vec<f64> {
    // wavenumber window around the resonance at K ~ 0.029 (width ~ 2e-4)
    let (k_lo, k_hi) = (0.025, 0.033);
    (0..points)
        .map(|i| {
            let k = k_lo + (k_hi - k_lo) * i as f64 / (points - 1) as f64;
            energy_for_wavenumber(k, cfg).unwrap()
        })
        .collect()
}

#[test]
fn sharp_resonance_advances_phase_by_pi() {
    let cfg = resonance_channel();
    let v = SeparablePotential::from_rows(&[vec![RESONANT_V]]).unwrap();
    let coarse: Vec<f64> = grid(&cfg, 401)
        .iter()
        .map(|&e| s_matrix_m1(e, RESONANT_V, &cfg).unwrap().tau)
        .collect();
    let coarse = unwrap_taus(&coarse).unwrap();
    let fine: Vec<f64> = grid(&cfg, 20_001)
        .iter()
        .map(|&e| s_matrix_numeric(e, &v, 4, &cfg).unwrap().tau)
        .collect();
    let fine = unwrap_taus(&fine).unwrap();
    let coarse_total = coarse.last().unwrap() - coarse[0];
    let fine_total = fine.last().unwrap() - fine[0];
    assert!(
        (coarse_total - fine_total).abs() < 1e-8,
        "{coarse_total} vs {fine_total}"
    );
    assert!(
        (coarse_total - std::f64::consts::PI).abs() < 0.15,
        "{coarse_total}"
    );
}
