//! Random channel, energy and potential generators shared by the tests.

use rand::rngs::StdRng;
use rand::Rng;
use relsep::{energy_for_wavenumber, Basis, CRule, ChannelConfig, SeparablePotential};

pub const ALPHAS: [f64; 3] = [1.0, 0.1, 1.0 / 137.0];

/// Uniform sample from [lo, hi) on the grid of multiples of 2^-20, so exact
/// rational oracles stay cheap.
pub fn dyadic(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    const SCALE: f64 = (1u64 << 20) as f64;
    let k = rng.gen_range((lo * SCALE).ceil() as i64..(hi * SCALE).ceil() as i64);
    k as f64 / SCALE
}

/// Both bases, kappa 1..3, lambda in [0.5, 3], alpha from `ALPHAS`, and
/// either the balance rule or a fixed C = f alpha with f in [0.3, 0.9].
pub fn random_channel(rng: &mut StdRng) -> ChannelConfig {
    let basis = if rng.gen_bool(0.5) {
        Basis::Laguerre
    } else {
        Basis::Oscillator
    };
    let alpha = ALPHAS[rng.gen_range(0..ALPHAS.len())];
    let c_rule = if rng.gen_bool(0.5) {
        CRule::Balance
    } else {
        CRule::Fixed(alpha * rng.gen_range(0.3..0.9))
    };
    ChannelConfig::new(
        basis,
        rng.gen_range(1..=3),
        rng.gen_range(0.5..3.0),
        alpha,
        c_rule,
    )
    .expect("sampled channel is valid")
}

/// A scattering energy with eta = K / lambda in [0.1, 5].
pub fn random_energy(rng: &mut StdRng, cfg: &ChannelConfig) -> f64 {
    let eta: f64 = rng.gen_range(0.1..5.0);
    energy_for_wavenumber(eta * cfg.lambda, cfg).expect("sampled energy is valid")
}

/// Symmetrized M x M potential with entries uniform in [-5, 5].
pub fn random_potential(rng: &mut StdRng, m: usize) -> SeparablePotential {
    let upper: Vec<Vec<f64>> = (0..m)
        .map(|i| (i..m).map(|_| rng.gen_range(-5.0..5.0)).collect())
        .collect();
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if j >= i {
                        upper[i][j - i]
                    } else {
                        upper[j][i - j]
                    }
                })
                .collect()
        })
        .collect();
    SeparablePotential::from_rows(&rows).expect("symmetric by construction")
}
