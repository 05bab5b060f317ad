mod common;

use common::oracles::{
    gauss_2f1_exact, gegenbauer_exact, kummer_1f1_fixed, laguerre_exact, rel_err,
};
use common::sampling::dyadic;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use relsep::specfun::{gauss_2f1_terminating, gegenbauer, kummer_1f1, laguerre};

const TOL: f64 = 1e-11;
/// Sums with more cancellation than this cannot reach `TOL` in double precision.
const MAX_CONDITION: f64 = 1e4;

#[test]
fn oracles_reproduce_low_degree_closed_forms() {
    // L_1^mu(x) = 1 + mu - x, C_2^nu(x) = 2 nu (nu + 1) x² - nu
    assert_eq!(laguerre_exact(1, 1.5, 0.25).to_f64(), 2.25);
    assert_eq!(
        gegenbauer_exact(2, 2.0, 0.5).to_f64(),
        2.0 * 2.0 * 3.0 * 0.25 - 2.0
    );
    // 2F1(-1, b; c; z) = 1 - b z / c
    assert_eq!(gauss_2f1_exact(-1, 3.0, 1.5, 0.5).to_f64(), 0.0);
    // 1F1(a; a; z) = e^z
    let (value, _) = kummer_1f1_fixed(1.25, 1.25, -3.0);
    assert!(rel_err(value, (-3.0f64).exp()) < 1e-15);
}

#[test]
fn laguerre_matches_exact_sum() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(0..=40usize);
        let mu = rng.gen_range(1..=16) as f64 / 2.0;
        let x = dyadic(&mut rng, 0.0, 30.0);
        let want = laguerre_exact(n, mu, x).to_f64();
        let err = rel_err(laguerre(n, mu, x).unwrap(), want);
        assert!(err < TOL, "L_{n}^{mu}({x}): rel err {err:e}");
    }
}

#[test]
fn gegenbauer_matches_exact_sum() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..200 {
        let n = rng.gen_range(0..=40usize);
        let nu = rng.gen_range(2..=16) as f64 / 2.0;
        let x = dyadic(&mut rng, -1.0, 1.0);
        let want = gegenbauer_exact(n, nu, x).to_f64();
        let err = rel_err(gegenbauer(n, nu, x).unwrap(), want);
        assert!(err < TOL, "C_{n}^{nu}({x}): rel err {err:e}");
    }
}

#[test]
fn gauss_2f1_matches_exact_sum_on_cosine_family() {
    let mut rng = StdRng::seed_from_u64(13);
    let mut checked = 0;
    while checked < 200 {
        let n = rng.gen_range(0..=15i64);
        let kappa = rng.gen_range(1..=3i64);
        let (a, b, c) = (-n - 1 - 2 * kappa, n as f64 + 1.0, 0.5 - kappa as f64);
        let z = dyadic(&mut rng, 0.0, 1.0);
        let exact = gauss_2f1_exact(a, b, c, z);
        if exact.condition() > MAX_CONDITION {
            continue;
        }
        checked += 1;
        let err = rel_err(gauss_2f1_terminating(a, b, c, z).unwrap(), exact.to_f64());
        assert!(err < TOL, "2F1({a}, {b}; {c}; {z}): rel err {err:e}");
    }
}

#[test]
fn kummer_matches_fixed_point_series() {
    let mut rng = StdRng::seed_from_u64(14);
    let mut checked = 0;
    while checked < 200 {
        let (a, b, z) = if checked % 2 == 0 {
            // the oscillator cosine-like family
            let n = rng.gen_range(0..=15) as f64;
            let kappa = rng.gen_range(1..=3) as f64;
            (-n - 0.5 - kappa, 0.5 - kappa, dyadic(&mut rng, 0.0, 25.0))
        } else {
            (
                dyadic(&mut rng, -10.0, 5.0),
                dyadic(&mut rng, 0.5, 10.0),
                dyadic(&mut rng, -60.0, 30.0),
            )
        };
        let (want, condition) = kummer_1f1_fixed(a, b, z);
        // the transformed series is used for z < 0, so only its conditioning matters there
        let route_condition = if z < 0.0 {
            condition.min(kummer_1f1_fixed(b - a, b, -z).1)
        } else {
            condition
        };
        if route_condition > MAX_CONDITION {
            continue;
        }
        checked += 1;
        let err = rel_err(kummer_1f1(a, b, z).unwrap(), want);
        assert!(err < TOL, "1F1({a}; {b}; {z}): rel err {err:e}");
    }
}
