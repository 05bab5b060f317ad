//! Expansion coefficients of the free (H0) problem: the sine-like s_n and
//! cosine-like c_n, and the kinematical coefficients T_n, R_n± built from
//! them.
//!
//! The production path takes s_0, s_1, c_0, c_1 from the closed forms and
//! generates higher indices with the three-term recursion of Jmat(epsilon).
//! The closed forms for arbitrary n are kept for cross-checking; the
//! cosine-like one is a terminating 2F1 (Laguerre) or a 1F1 (oscillator)
//! whose alternating sum cancels badly beyond n ≈ 10.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::basis::{j_matrix_with_c, normalization, TridiagonalRepr};
use crate::error::{Error, Result};
use crate::kinematics::{kinematic_state, Basis, ChannelConfig, KinematicState};
use crate::specfun::{
    gauss_2f1_with_magnitude, gegenbauer, kummer_1f1_with_magnitude, laguerre, ln_gamma,
};

/// Relative agreement required between the recursion and the closed forms.
pub const CONSISTENCY_TOL: f64 = 1e-9;

/// Closed-form values are only trusted where the series cancellation,
/// sum|terms| / |sum| times machine epsilon, stays below this.
const TRUSTED_CANCELLATION: f64 = 1e-12;

/// Sine-like and cosine-like coefficients for indices 0..len.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientPair {
    pub s: Vec<f64>,
    pub c: Vec<f64>,
}

impl CoefficientPair {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn scaled(&self, factor: f64) -> CoefficientPair {
        CoefficientPair {
            s: self.s.iter().map(|x| x * factor).collect(),
            c: self.c.iter().map(|x| x * factor).collect(),
        }
    }
}

/// T_n = (c_n - i s_n) / (c_n + i s_n) and R_{n+1}± = (c_{n+1} ± i s_{n+1}) / (c_n ± i s_n).
#[derive(Debug, Clone, PartialEq)]
pub struct Kinematical {
    pub t: Vec<Complex64>,
    /// `r_plus[k]` holds R⁺_{k+1}.
    pub r_plus: Vec<Complex64>,
    /// `r_minus[k]` holds R⁻_{k+1}.
    pub r_minus: Vec<Complex64>,
}

impl Kinematical {
    pub fn t(&self, n: usize) -> Complex64 {
        self.t[n]
    }

    /// R⁺_n for n >= 1.
    pub fn r_plus(&self, n: usize) -> Complex64 {
        assert!(n >= 1, "R_n is defined for n >= 1");
        self.r_plus[n - 1]
    }

    /// R⁻_n for n >= 1.
    pub fn r_minus(&self, n: usize) -> Complex64 {
        assert!(n >= 1, "R_n is defined for n >= 1");
        self.r_minus[n - 1]
    }
}

struct ClosedForm {
    s: f64,
    c: f64,
    /// sum|terms| / |sum| of the series inside c
    c_cancellation: f64,
}

fn closed_form(n: usize, state: &KinematicState, cfg: &ChannelConfig) -> Result<ClosedForm> {
    let kappa = cfg.kappa_f64();
    let lambda = cfg.lambda;
    let eta = state.eta;
    let a_n = normalization(n, cfg)?;
    let nf = n as f64;
    let ratio = |sum: f64, magnitude: f64| {
        if sum == 0.0 {
            f64::INFINITY
        } else {
            magnitude / sum.abs()
        }
    };
    match cfg.basis {
        Basis::Laguerre => {
            // rational forms of sin(omega), cos(omega), sin²(omega / 2) in eta
            let denom = eta * eta + 0.25;
            let sin_w = eta / denom;
            let cos_w = (eta * eta - 0.25) / denom;
            let half_sin2 = 1.0 / (1.0 + 4.0 * eta * eta);
            let two_k = 2f64.powi(cfg.kappa as i32);
            let s = two_k / lambda
                * a_n
                * ln_gamma(kappa + 1.0)?.exp()
                * sin_w.powi(cfg.kappa as i32 + 1)
                * gegenbauer(n, kappa + 1.0, cos_w)?;
            let (f, magnitude) = gauss_2f1_with_magnitude(
                -(n as i64) - 1 - 2 * i64::from(cfg.kappa),
                nf + 1.0,
                0.5 - kappa,
                half_sin2,
            )?;
            let c = -two_k * a_n * ln_gamma(kappa + 0.5)?.exp()
                / (PI.sqrt() * lambda * sin_w.powi(cfg.kappa as i32))
                * f;
            Ok(ClosedForm {
                s,
                c,
                c_cancellation: ratio(f, magnitude),
            })
        }
        Basis::Oscillator => {
            let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
            let z = eta * eta;
            let gauss = (-0.5 * z).exp();
            let s = sign / lambda
                * (0.5 * PI).sqrt()
                * a_n
                * eta.powf(kappa + 1.0)
                * gauss
                * laguerre(n, kappa + 0.5, z)?;
            let (f, magnitude) = kummer_1f1_with_magnitude(-nf - 0.5 - kappa, 0.5 - kappa, z)?;
            let c = sign * ln_gamma(kappa + 0.5)?.exp() * a_n / ((2.0 * PI).sqrt() * lambda)
                * eta.powf(-kappa)
                * gauss
                * f;
            Ok(ClosedForm {
                s,
                c,
                c_cancellation: ratio(f, magnitude),
            })
        }
    }
}

/// Closed-form sine-like coefficient s_n(epsilon).
pub fn sine_like(n: usize, state: &KinematicState, cfg: &ChannelConfig) -> Result<f64> {
    closed_form(n, state, cfg).map(|f| f.s)
}

/// Closed-form cosine-like coefficient c_n(epsilon).
pub fn cosine_like(n: usize, state: &KinematicState, cfg: &ChannelConfig) -> Result<f64> {
    closed_form(n, state, cfg).map(|f| f.c)
}

/// s_n and c_n for n = 0..jmat.size(): closed forms for n = 0, 1 and the
/// Jmat recursion (rows 1..size-2) above that.
pub fn coefficient_pair(
    state: &KinematicState,
    cfg: &ChannelConfig,
    jmat: &TridiagonalRepr,
) -> Result<CoefficientPair> {
    let len = jmat.size();
    if len < 2 {
        return Err(Error::InvalidConfig(
            "coefficient recursion needs Jmat of size >= 2".into(),
        ));
    }
    let first = closed_form(0, state, cfg)?;
    let second = closed_form(1, state, cfg)?;
    let mut s = vec![first.s, second.s];
    let mut c = vec![first.c, second.c];
    for n in 1..len - 1 {
        let upper = jmat.offdiag[n];
        if upper == 0.0 {
            return Err(Error::DomainError(format!(
                "Jmat off-diagonal vanishes at row {n}; recursion cannot proceed"
            )));
        }
        let lower = jmat.offdiag[n - 1];
        let diag = jmat.diag[n];
        s.push(-(lower * s[n - 1] + diag * s[n]) / upper);
        c.push(-(lower * c[n - 1] + diag * c[n]) / upper);
    }
    Ok(CoefficientPair { s, c })
}

/// T_n and R_n± from a coefficient pair.
pub fn kinematical(pair: &CoefficientPair) -> Result<Kinematical> {
    let mut g_plus = Vec::with_capacity(pair.len());
    for (n, (&s, &c)) in pair.s.iter().zip(&pair.c).enumerate() {
        let norm = s * s + c * c;
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroAmplitude { index: n });
        }
        g_plus.push(Complex64::new(c, s));
    }
    let t = g_plus.iter().map(|g| g.conj() / g).collect();
    let r_plus: Vec<Complex64> = g_plus.windows(2).map(|w| w[1] / w[0]).collect();
    let r_minus = g_plus
        .windows(2)
        .map(|w| w[1].conj() / w[0].conj())
        .collect();
    Ok(Kinematical { t, r_plus, r_minus })
}

/// Relative residual of the Jmat three-term recursion for rows `rows`,
/// |J_{n,n-1} v_{n-1} + J_{n,n} v_n + J_{n,n+1} v_{n+1}| / max |term|.
pub fn recursion_residuals(
    jmat: &TridiagonalRepr,
    values: &[f64],
    rows: std::ops::RangeInclusive<usize>,
) -> Vec<f64> {
    rows.map(|n| {
        let mut terms = vec![jmat.diag[n] * values[n], jmat.offdiag[n] * values[n + 1]];
        if n > 0 {
            terms.push(jmat.offdiag[n - 1] * values[n - 1]);
        }
        let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        let sum: f64 = terms.iter().sum();
        if scale == 0.0 {
            0.0
        } else {
            sum.abs() / scale
        }
    })
    .collect()
}

/// Compare a recursion-generated pair against the closed forms.
///
/// Sine-like values are compared at every index. Cosine-like values are
/// compared where the closed-form series is numerically trustworthy.
pub fn verify_against_closed_form(
    state: &KinematicState,
    cfg: &ChannelConfig,
    pair: &CoefficientPair,
) -> Result<()> {
    for n in 0..pair.len() {
        let exact = closed_form(n, state, cfg)?;
        let amplitude = pair.s[n].hypot(pair.c[n]);
        let s_err = (pair.s[n] - exact.s).abs() / amplitude;
        if s_err > CONSISTENCY_TOL {
            return Err(Error::ConsistencyFailure(format!(
                "sine-like s_{n}: recursion {} vs closed form {} (relative {s_err:.2e})",
                pair.s[n], exact.s
            )));
        }
        if exact.c_cancellation * f64::EPSILON <= TRUSTED_CANCELLATION {
            let c_err = (pair.c[n] - exact.c).abs() / amplitude;
            if c_err > CONSISTENCY_TOL {
                return Err(Error::ConsistencyFailure(format!(
                    "cosine-like c_{n}: recursion {} vs closed form {} (relative {c_err:.2e})",
                    pair.c[n], exact.c
                )));
            }
        }
    }
    Ok(())
}

/// Everything about the free problem at one energy: kinematics, Jmat rows
/// 0..=n_size+1, and coefficients through index n_size+1.
#[derive(Debug, Clone)]
pub struct ReferenceSolution {
    pub state: KinematicState,
    pub jmat: TridiagonalRepr,
    pub pair: CoefficientPair,
    pub kinematical: Kinematical,
}

impl ReferenceSolution {
    pub fn compute(epsilon: f64, cfg: &ChannelConfig, n_size: usize) -> Result<Self> {
        cfg.validate()?;
        let state = kinematic_state(epsilon, cfg)?;
        let jmat = j_matrix_with_c(epsilon, n_size + 2, cfg, state.c_value)?;
        let pair = coefficient_pair(&state, cfg, &jmat)?;
        let kinematical = kinematical(&pair)?;
        Ok(Self {
            state,
            jmat,
            pair,
            kinematical,
        })
    }
}
