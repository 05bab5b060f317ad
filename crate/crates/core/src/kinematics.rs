//! Channel parameters and per-energy kinematics: the small-component
//! parameter C, the wavenumber K, eta = K / lambda, and the Laguerre-basis
//! angle omega.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which L² spinor basis carries the problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// x = lambda r, weight e^{-x/2}
    Laguerre,
    /// x = (lambda r)^2, weight e^{-x/2}
    Oscillator,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::Laguerre => "laguerre",
            Basis::Oscillator => "oscillator",
        }
    }
}

/// How the small-component parameter C is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum CRule {
    /// A fixed positive value.
    Fixed(f64),
    /// C = alpha / (1 + epsilon); K becomes sqrt(epsilon^2 - 1) / alpha.
    Balance,
    /// C = alpha / 2, the nonrelativistic-limit choice.
    NonrelLimit,
}

/// Physical and basis parameters of one scattering channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub basis: Basis,
    /// Spin-orbit quantum number; only kappa >= 1 is supported.
    pub kappa: u32,
    pub lambda: f64,
    pub alpha: f64,
    pub c_rule: CRule,
}

impl ChannelConfig {
    pub fn new(basis: Basis, kappa: u32, lambda: f64, alpha: f64, c_rule: CRule) -> Result<Self> {
        let cfg = Self {
            basis,
            kappa,
            lambda,
            alpha,
            c_rule,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kappa < 1 {
            return Err(Error::InvalidConfig(format!(
                "kappa must be an integer >= 1, got {}",
                self.kappa
            )));
        }
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if let CRule::Fixed(c) = self.c_rule {
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "fixed C must be positive, got {c}"
                )));
            }
        }
        Ok(())
    }

    pub fn kappa_f64(&self) -> f64 {
        f64::from(self.kappa)
    }
}

/// Derived per-energy quantities for one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicState {
    pub epsilon: f64,
    pub c_value: f64,
    pub k: f64,
    pub eta: f64,
    /// Only populated for the Laguerre basis.
    pub omega: Option<f64>,
}

/// Resolve the small-component parameter C at energy `epsilon`.
pub fn resolve_c(epsilon: f64, rule: CRule, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::DomainError(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let c = match rule {
        CRule::Fixed(c) => c,
        CRule::NonrelLimit => 0.5 * alpha,
        CRule::Balance => {
            if epsilon == -1.0 {
                return Err(Error::DomainError(
                    "balance rule is undefined at epsilon = -1".into(),
                ));
            }
            alpha / (1.0 + epsilon)
        }
    };
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::DomainError(format!(
            "C must be positive, got {c} at epsilon = {epsilon}"
        )));
    }
    Ok(c)
}

/// Wavenumber K(epsilon) for a given C; errors outside the scattering domain.
pub fn wavenumber(epsilon: f64, alpha: f64, c_value: f64) -> Result<f64> {
    let shifted = epsilon - 1.0;
    let denominator = shifted + 2.0 * (1.0 - alpha / c_value);
    if denominator == 0.0 {
        return Err(Error::KinematicPole { epsilon });
    }
    let radicand = -shifted / (c_value * c_value * denominator);
    if !(radicand > 0.0) || !radicand.is_finite() {
        return Err(Error::NotScatteringEnergy { epsilon });
    }
    Ok(radicand.sqrt())
}

/// Laguerre-basis angle omega in (0, pi) with cos omega = (eta² - 1/4) / (eta² + 1/4).
pub fn omega_angle(eta: f64) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(Error::DomainError(format!(
            "eta must be positive, got {eta}"
        )));
    }
    // sin omega = eta / (eta² + 1/4), so atan2 keeps full precision near 0 and pi
    Ok(eta.atan2(eta * eta - 0.25))
}

/// Evaluate every kinematic quantity at `epsilon`.
pub fn kinematic_state(epsilon: f64, cfg: &ChannelConfig) -> Result<KinematicState> {
    let c_value = resolve_c(epsilon, cfg.c_rule, cfg.alpha)?;
    let k = wavenumber(epsilon, cfg.alpha, c_value)?;
    let eta = k / cfg.lambda;
    let omega = match cfg.basis {
        Basis::Laguerre => Some(omega_angle(eta)?),
        Basis::Oscillator => None,
    };
    Ok(KinematicState {
        epsilon,
        c_value,
        k,
        eta,
        omega,
    })
}

/// Energy at which the channel has wavenumber `k`.
///
/// Inverts `wavenumber` for the configured C-rule. For fixed C above alpha
/// the scattering energies lie below 1.
pub fn energy_for_wavenumber(k: f64, cfg: &ChannelConfig) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::DomainError(format!(
            "wavenumber must be positive, got {k}"
        )));
    }
    let c = match cfg.c_rule {
        CRule::Balance => return Ok((1.0 + (cfg.alpha * k).powi(2)).sqrt()),
        CRule::Fixed(c) => c,
        CRule::NonrelLimit => 0.5 * cfg.alpha,
    };
    let kc2 = (k * c).powi(2);
    let d = 2.0 * (1.0 - cfg.alpha / c);
    if d == 0.0 {
        return Err(Error::DomainError(
            "C = alpha admits no scattering energies".into(),
        ));
    }
    Ok(1.0 - kc2 * d / (1.0 + kc2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn laguerre_balance(alpha: f64) -> ChannelConfig {
        ChannelConfig::new(Basis::Laguerre, 1, 1.0, alpha, CRule::Balance).unwrap()
    }

    #[test]
    fn c_rules() {
        assert_eq!(resolve_c(1.7, CRule::NonrelLimit, 0.01).unwrap(), 0.005);
        assert_relative_eq!(resolve_c(1.5, CRule::Balance, 1.0).unwrap(), 0.4);
        assert_eq!(resolve_c(3.0, CRule::Fixed(0.3), 0.1).unwrap(), 0.3);
        assert!(resolve_c(-1.0, CRule::Balance, 1.0).is_err());
        assert!(resolve_c(-2.0, CRule::Balance, 1.0).is_err());
    }

    #[test]
    fn wavenumber_examples() {
        assert_relative_eq!(
            wavenumber(1.5, 1.0, 0.4).unwrap(),
            1.25f64.sqrt(),
            max_relative = 1e-15
        );
        let c = resolve_c(1.0, CRule::Balance, 0.3).unwrap();
        assert_eq!(
            wavenumber(1.0, 0.3, c),
            Err(Error::NotScatteringEnergy { epsilon: 1.0 })
        );
    }

    #[test]
    fn wavenumber_nonrelativistic_limit() {
        let alpha = 0.002;
        let e = 2.0;
        let k = wavenumber(1.0 + alpha * alpha * e, alpha, 0.5 * alpha).unwrap();
        assert!((k - (2.0 * e).sqrt()).abs() < 10.0 * alpha * alpha);
    }

    #[test]
    fn kinematic_pole_is_distinct() {
        // epsilon - 1 + 2 (1 - alpha / C) = 0 with alpha = 1, C = 0.5 -> epsilon = 3
        assert_eq!(
            wavenumber(3.0, 1.0, 0.5),
            Err(Error::KinematicPole { epsilon: 3.0 })
        );
    }

    #[test]
    fn omega_examples() {
        assert_relative_eq!(omega_angle(0.5).unwrap(), FRAC_PI_2, max_relative = 1e-15);
        assert_relative_eq!(
            omega_angle(1.0).unwrap(),
            0.6f64.acos(),
            max_relative = 1e-15
        );
        assert!(omega_angle(1e8).unwrap() < 1e-7);
        assert!(omega_angle(1e-8).unwrap() > PI - 1e-7);
        assert!(omega_angle(0.0).is_err());
    }

    #[test]
    fn state_composition() {
        let cfg = laguerre_balance(1.0);
        let state = kinematic_state(1.5, &cfg).unwrap();
        assert_relative_eq!(state.c_value, 0.4);
        assert_relative_eq!(state.k, 1.118_033_988_749_895, max_relative = 1e-14);
        assert_relative_eq!(state.eta, state.k);
        assert_relative_eq!(
            state.omega.unwrap(),
            (2.0f64 / 3.0).acos(),
            max_relative = 1e-14
        );

        assert!(matches!(
            kinematic_state(0.5, &cfg),
            Err(Error::NotScatteringEnergy { .. })
        ));

        let fixed = ChannelConfig {
            c_rule: CRule::Fixed(0.4),
            ..cfg
        };
        assert_eq!(kinematic_state(1.5, &fixed).unwrap(), state);

        let osc = ChannelConfig {
            basis: Basis::Oscillator,
            ..cfg
        };
        assert_eq!(kinematic_state(1.5, &osc).unwrap().omega, None);
    }

    #[test]
    fn config_validation() {
        assert!(ChannelConfig::new(Basis::Laguerre, 0, 1.0, 1.0, CRule::Balance).is_err());
        assert!(ChannelConfig::new(Basis::Laguerre, 1, 0.0, 1.0, CRule::Balance).is_err());
        assert!(ChannelConfig::new(Basis::Laguerre, 1, 1.0, -1.0, CRule::Balance).is_err());
        assert!(ChannelConfig::new(Basis::Laguerre, 1, 1.0, 1.0, CRule::Fixed(0.0)).is_err());
    }

    #[test]
    fn energy_inversion_round_trips() {
        for rule in [
            CRule::Balance,
            CRule::NonrelLimit,
            CRule::Fixed(0.3),
            CRule::Fixed(0.05),
        ] {
            let cfg = ChannelConfig::new(Basis::Oscillator, 2, 1.3, 0.1, rule).unwrap();
            for k in [0.2, 1.0, 3.5] {
                let eps = energy_for_wavenumber(k, &cfg).unwrap();
                let state = kinematic_state(eps, &cfg).unwrap();
                assert_relative_eq!(state.k, k, max_relative = 1e-9);
            }
        }
    }

    proptest! {
        #[test]
        fn balance_gives_relativistic_wavenumber(eps in 1.0001f64..50.0, alpha in 1e-3f64..2.0) {
            let c = resolve_c(eps, CRule::Balance, alpha).unwrap();
            let k = wavenumber(eps, alpha, c).unwrap();
            let expected = (eps * eps - 1.0).sqrt() / alpha;
            prop_assert!(((k - expected) / expected).abs() < 1e-12);
        }

        #[test]
        fn cos_omega_is_increasing(a in 1e-3f64..50.0, b in 1e-3f64..50.0) {
            prop_assume!(a < b);
            let ca = omega_angle(a).unwrap().cos();
            let cb = omega_angle(b).unwrap().cos();
            prop_assert!(ca <= cb);
            prop_assert!(ca > -1.0 && cb < 1.0);
        }

        #[test]
        fn state_is_deterministic(eps in 1.001f64..5.0) {
            let cfg = laguerre_balance(0.5);
            let a = kinematic_state(eps, &cfg).unwrap();
            let b = kinematic_state(eps, &cfg).unwrap();
            prop_assert_eq!(a.k.to_bits(), b.k.to_bits());
            prop_assert_eq!(a.omega.unwrap().to_bits(), b.omega.unwrap().to_bits());
        }
    }
}
