//! Closed-form S-matrix e^{2i tau} for one-, two- and three-term separable
//! potentials, and phase unwrapping along an energy grid.
//!
//! The formulas are written in terms of the leading Jmat elements, T_0 and
//! R_1⁺, R_2⁺. The potential enters only as w = alpha² V.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::basis::SeparablePotential;
use crate::coefficients::ReferenceSolution;
use crate::error::{Error, Result};
use crate::kinematics::ChannelConfig;

/// Relative size below which a denominator of the closed forms counts as vanishing.
pub const NEAR_SINGULAR_TOL: f64 = 1e-10;

/// Which route produced an S-matrix value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    AnalyticM1,
    AnalyticM2,
    AnalyticM3,
    /// Exact J-matrix solution with truncation N.
    Numeric(usize),
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::AnalyticM1 => "analytic_m1",
            Method::AnalyticM2 => "analytic_m2",
            Method::AnalyticM3 => "analytic_m3",
            Method::Numeric(_) => "numeric",
        }
    }

    pub fn truncation(self) -> Option<usize> {
        match self {
            Method::Numeric(n) => Some(n),
            _ => None,
        }
    }
}

/// S-matrix value at one energy.
#[derive(Debug, Clone, PartialEq)]
pub struct SMatrixPoint {
    pub epsilon: f64,
    pub s_value: Complex64,
    /// Principal branch, (-pi/2, pi/2].
    pub tau: f64,
    pub method: Method,
    pub diagnostics: BTreeMap<String, f64>,
}

impl SMatrixPoint {
    pub fn new(
        epsilon: f64,
        s_value: Complex64,
        method: Method,
        diagnostics: BTreeMap<String, f64>,
    ) -> Self {
        Self {
            epsilon,
            s_value,
            tau: principal_tau(s_value),
            method,
            diagnostics,
        }
    }
}

/// Half the argument of `s`, with arg taken in (-pi, pi].
pub fn principal_tau(s: Complex64) -> f64 {
    let arg = s.arg();
    // atan2 returns -pi for a negative real with -0.0 imaginary part
    if arg == -PI {
        FRAC_PI_2
    } else {
        0.5 * arg
    }
}

/// The free-problem quantities the closed forms consume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormInputs {
    pub j00: f64,
    pub j01: f64,
    pub j11: f64,
    pub j12: f64,
    pub t0: Complex64,
    pub r1: Complex64,
    pub r2: Complex64,
}

impl ClosedFormInputs {
    pub fn from_reference(reference: &ReferenceSolution) -> Self {
        let j = &reference.jmat;
        let k = &reference.kinematical;
        Self {
            j00: j.diag[0],
            j01: j.offdiag[0],
            j11: j.diag[1],
            j12: j.offdiag[1],
            t0: k.t(0),
            r1: k.r_plus(1),
            r2: k.r_plus(2),
        }
    }

    fn scale(&self) -> f64 {
        self.j00
            .abs()
            .max(self.j01.abs())
            .max(self.j11.abs())
            .max(self.j12.abs())
    }
}

type Diagnostics = BTreeMap<String, f64>;

fn guard(
    term: &'static str,
    value: Complex64,
    threshold: f64,
    diag: &mut Diagnostics,
) -> Result<()> {
    let magnitude = value.norm();
    diag.insert(format!("abs_{term}"), magnitude);
    if !(magnitude >= threshold) {
        return Err(Error::NearSingularFormula { term, magnitude });
    }
    Ok(())
}

/// One-term closed form with coupling w00 = alpha² V00.
pub fn closed_form_m1(inp: &ClosedFormInputs, w00: f64) -> Result<(Complex64, Diagnostics)> {
    let mut diag = Diagnostics::new();
    let threshold = NEAR_SINGULAR_TOL * inp.scale();
    let base = inp.j00 + inp.j01 * inp.r1;
    guard("j00_plus_j01_r1", base, threshold, &mut diag)?;
    guard("j00_plus_j01_r1_plus_w00", base + w00, threshold, &mut diag)?;
    let one = Complex64::new(1.0, 0.0);
    let bracket = one + w00 / base;
    let s = inp.t0 + (one - inp.t0) / bracket;
    Ok((s, diag))
}

/// Two-term closed form with coupling matrix w = alpha² V.
pub fn closed_form_m2(
    inp: &ClosedFormInputs,
    w: [[f64; 2]; 2],
) -> Result<(Complex64, Diagnostics)> {
    let mut diag = Diagnostics::new();
    let threshold = NEAR_SINGULAR_TOL * inp.scale();
    let one = Complex64::new(1.0, 0.0);
    let (j00, j01, r1) = (inp.j00, inp.j01, inp.r1);

    let x = j01 - w[1][1] * r1;
    let y = Complex64::new(j01 + w[0][1], 0.0);
    guard("j01_minus_w11_r1", x, threshold, &mut diag)?;
    guard("j01_plus_w01", y, threshold, &mut diag)?;
    let zeta = (x / y).arg();
    diag.insert("zeta".into(), zeta);

    let bracket = x * (j00 + w[0][0]) / y + r1 * y;
    guard("bracket", bracket, threshold, &mut diag)?;
    let s = inp.t0 * Complex64::from_polar(1.0, -2.0 * zeta)
        + (one - inp.t0) * y * ((j00 + j01 * r1) / x) / bracket;
    Ok((s, diag))
}

/// Three-term closed form with coupling matrix w = alpha² V.
///
/// The alpha² prefactor of the potential bracket is folded into w, so
/// J12 / alpha² - R2 V22 - V02 Lambda becomes J12 - R2 w22 - w02 Lambda.
pub fn closed_form_m3(
    inp: &ClosedFormInputs,
    w: [[f64; 3]; 3],
) -> Result<(Complex64, Diagnostics)> {
    let mut diag = Diagnostics::new();
    let threshold = NEAR_SINGULAR_TOL * inp.scale();
    let one = Complex64::new(1.0, 0.0);
    let (j00, j01, j11, j12, r1, r2) = (inp.j00, inp.j01, inp.j11, inp.j12, inp.r1, inp.r2);

    let p_den = j12 + w[1][2];
    guard("j12_plus_w12", p_den.into(), threshold, &mut diag)?;
    let p = (j11 + w[1][1]) / p_den;

    let lambda_num = j01 / r1 + j11 - w[1][2] * r2 + p * (-j12 + w[2][2] * r2);
    let lambda_den = j01 + w[0][1] - w[0][2] * p;
    guard(
        "lambda_denominator",
        lambda_den.into(),
        threshold,
        &mut diag,
    )?;
    let lambda = lambda_num / lambda_den;
    diag.insert("lambda_re".into(), lambda.re);
    diag.insert("lambda_im".into(), lambda.im);

    let r1_lambda = r1 * lambda;
    guard("r1_lambda", r1_lambda, NEAR_SINGULAR_TOL, &mut diag)?;
    let xi = r1_lambda.arg();
    diag.insert("xi".into(), xi);

    let brace = r1_lambda * (j00 + w[0][0])
        + r1 * ((j01 + w[0][1]) / p_den * (j12 - r2 * w[2][2] - w[0][2] * lambda) + r2 * w[0][2]);
    guard("brace", brace, threshold, &mut diag)?;

    let s = inp.t0 * Complex64::from_polar(1.0, -2.0 * xi)
        + (one - inp.t0) / r1_lambda * (j00 + r1 * j01) / brace;
    Ok((s, diag))
}

fn coupling<const M: usize>(v: &SeparablePotential, alpha: f64) -> [[f64; M]; M] {
    let a2 = alpha * alpha;
    std::array::from_fn(|i| std::array::from_fn(|j| a2 * v.get(i, j)))
}

fn reference_for_closed_form(epsilon: f64, cfg: &ChannelConfig) -> Result<ReferenceSolution> {
    // rows 0..=2 of Jmat and coefficients through index 2
    ReferenceSolution::compute(epsilon, cfg, 1)
}

fn finish(epsilon: f64, result: (Complex64, Diagnostics), method: Method) -> SMatrixPoint {
    SMatrixPoint::new(epsilon, result.0, method, result.1)
}

/// Closed-form S-matrix of a one-term potential.
pub fn s_matrix_m1(epsilon: f64, v00: f64, cfg: &ChannelConfig) -> Result<SMatrixPoint> {
    let reference = reference_for_closed_form(epsilon, cfg)?;
    let inputs = ClosedFormInputs::from_reference(&reference);
    let w00 = cfg.alpha * cfg.alpha * v00;
    Ok(finish(
        epsilon,
        closed_form_m1(&inputs, w00)?,
        Method::AnalyticM1,
    ))
}

fn expect_rank(v: &SeparablePotential, m: usize) -> Result<()> {
    if v.m() != m {
        return Err(Error::InvalidConfig(format!(
            "expected a {m}-term potential, got M = {}",
            v.m()
        )));
    }
    Ok(())
}

/// Closed-form S-matrix of a two-term potential.
pub fn s_matrix_m2(
    epsilon: f64,
    v: &SeparablePotential,
    cfg: &ChannelConfig,
) -> Result<SMatrixPoint> {
    expect_rank(v, 2)?;
    let reference = reference_for_closed_form(epsilon, cfg)?;
    let inputs = ClosedFormInputs::from_reference(&reference);
    Ok(finish(
        epsilon,
        closed_form_m2(&inputs, coupling::<2>(v, cfg.alpha))?,
        Method::AnalyticM2,
    ))
}

/// Closed-form S-matrix of a three-term potential.
pub fn s_matrix_m3(
    epsilon: f64,
    v: &SeparablePotential,
    cfg: &ChannelConfig,
) -> Result<SMatrixPoint> {
    expect_rank(v, 3)?;
    let reference = reference_for_closed_form(epsilon, cfg)?;
    let inputs = ClosedFormInputs::from_reference(&reference);
    Ok(finish(
        epsilon,
        closed_form_m3(&inputs, coupling::<3>(v, cfg.alpha))?,
        Method::AnalyticM3,
    ))
}

/// Dispatch on M; closed forms exist for M = 1, 2, 3.
pub fn s_matrix_analytic(
    epsilon: f64,
    v: &SeparablePotential,
    cfg: &ChannelConfig,
) -> Result<SMatrixPoint> {
    match v.m() {
        1 => s_matrix_m1(epsilon, v.get(0, 0), cfg),
        2 => s_matrix_m2(epsilon, v, cfg),
        3 => s_matrix_m3(epsilon, v, cfg),
        m => Err(Error::InvalidConfig(format!(
            "closed forms exist only for M <= 3, got M = {m}"
        ))),
    }
}

/// Shift principal-branch phases by multiples of pi so consecutive values
/// differ by less than pi/2.
pub fn unwrap_taus(taus: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(taus.len());
    let mut offset = 0.0;
    for (i, &tau) in taus.iter().enumerate() {
        if let Some(&prev) = out.last() {
            let raw: f64 = tau + offset - prev;
            let turns = (raw / PI).round();
            let jump = raw - turns * PI;
            if (jump.abs() - FRAC_PI_2).abs() < 1e-9 {
                return Err(Error::GridTooCoarse { index: i });
            }
            offset -= turns * PI;
        }
        out.push(tau + offset);
    }
    Ok(out)
}

/// Continuous tau along an energy-ordered sequence of points.
pub fn unwrap_phase(points: &[SMatrixPoint]) -> Result<Vec<f64>> {
    let taus: Vec<f64> = points.iter().map(|p| p.tau).collect();
    unwrap_taus(&taus)
}
