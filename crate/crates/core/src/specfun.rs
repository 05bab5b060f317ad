//! Special functions used by the basis tables: generalized Laguerre and
//! Gegenbauer polynomials, terminating Gauss and confluent hypergeometric
//! series, log-gamma and the Pochhammer symbol.
//!
//! Everything here is real-valued double precision. The polynomial families
//! are evaluated with their upward three-term recurrences.

use crate::error::{Error, Result};

/// Largest polynomial degree accepted by the evaluators in this module.
pub const MAX_DEGREE: usize = 200;

/// Cancellation ratio below which `kummer_1f1` accepts the direct series for z < 0.
const WELL_CONDITIONED: f64 = 8.0;

const KUMMER_MAX_TERMS: usize = 10_000;
const KUMMER_REL_TOL: f64 = 1.0e-16;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_8;

// zeta(k) for k = 2..=26
const ZETA: [f64; 25] = [
    1.644_934_066_848_226_436_5,
    1.202_056_903_159_594_285_4,
    1.082_323_233_711_138_191_5,
    1.036_927_755_143_369_926_3,
    1.017_343_061_984_449_139_7,
    1.008_349_277_381_922_826_8,
    1.004_077_356_197_944_339_4,
    1.002_008_392_826_082_214_4,
    1.000_994_575_127_818_085_3,
    1.000_494_188_604_119_464_6,
    1.000_246_086_553_308_048_3,
    1.000_122_713_347_578_489_1,
    1.000_061_248_135_058_704_8,
    1.000_030_588_236_307_020_5,
    1.000_015_282_259_408_651_9,
    1.000_007_637_197_637_899_8,
    1.000_003_817_293_264_999_8,
    1.000_001_908_212_716_553_9,
    1.000_000_953_962_033_872_8,
    1.000_000_476_932_986_787_8,
    1.000_000_238_450_502_727_7,
    1.000_000_119_219_925_965_3,
    1.000_000_059_608_189_051_3,
    1.000_000_029_803_503_514_7,
    1.000_000_014_901_554_828_4,
];

// B_2k / (2k (2k-1)) for k = 1..=10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        return Err(Error::CapExceeded {
            degree: n,
            cap: MAX_DEGREE,
        });
    }
    Ok(())
}

/// Generalized Laguerre polynomial L_n^mu(x).
pub fn laguerre(n: usize, mu: f64, x: f64) -> Result<f64> {
    check_degree(n)?;
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + mu - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + mu - x) * cur - (kf + mu) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Gegenbauer polynomial C_n^nu(x).
pub fn gegenbauer(n: usize, nu: f64, x: f64) -> Result<f64> {
    check_degree(n)?;
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * nu * x;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 * (kf + nu) * x * cur - (kf + 2.0 * nu - 1.0) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Coefficients of z^k, k = 0..=|a|, of the terminating series 2F1(a, b; c; z).
pub fn gauss_2f1_coefficients(a: i64, b: f64, c: f64) -> Result<Vec<f64>> {
    if a > 0 {
        return Err(Error::DegenerateParameters(format!(
            "terminating 2F1 needs a nonpositive integer a, got {a}"
        )));
    }
    let terms = a.unsigned_abs() as usize;
    let mut coefficients = Vec::with_capacity(terms + 1);
    let mut coef = 1.0;
    coefficients.push(coef);
    for k in 0..terms {
        let kf = k as f64;
        if c + kf == 0.0 {
            return Err(Error::DegenerateParameters(format!(
                "(c)_k vanishes at k = {} for c = {c}",
                k + 1
            )));
        }
        coef *= (a as f64 + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
        coefficients.push(coef);
    }
    Ok(coefficients)
}

/// Terminating sum together with sum_k |term_k|, which bounds the cancellation.
pub(crate) fn gauss_2f1_with_magnitude(a: i64, b: f64, c: f64, z: f64) -> Result<(f64, f64)> {
    let coefficients = gauss_2f1_coefficients(a, b, c)?;
    let mut sum = CompensatedSum::default();
    let mut magnitude = 0.0;
    let mut power = 1.0;
    for coef in coefficients {
        let term = coef * power;
        sum.add(term);
        magnitude += term.abs();
        power *= z;
    }
    Ok((sum.value(), magnitude))
}

/// Gauss hypergeometric function 2F1(a, b; c; z) for a nonpositive integer `a`,
/// summed exactly over its |a| + 1 terms.
pub fn gauss_2f1_terminating(a: i64, b: f64, c: f64, z: f64) -> Result<f64> {
    gauss_2f1_with_magnitude(a, b, c, z).map(|(value, _)| value)
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Confluent hypergeometric function 1F1(a; b; z).
///
/// The direct series is used for z >= 0. For z < 0 the direct series and
/// Kummer's transformation e^z 1F1(b - a; b; -z) are both summed and the one
/// with less cancellation (sum |terms| / |sum|) is returned.
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    if z >= 0.0 {
        return kummer_1f1_direct(a, b, z);
    }
    let direct = kummer_1f1_with_magnitude(a, b, z);
    if let Ok((value, magnitude)) = direct {
        if magnitude <= WELL_CONDITIONED * value.abs() {
            return Ok(value);
        }
    }
    let transformed = kummer_1f1_with_magnitude(b - a, b, -z);
    match (direct, transformed) {
        (Ok((d, dm)), Ok((t, tm))) => {
            // compare cancellation ratios without dividing by a possible zero
            if dm * t.abs() <= tm * d.abs() {
                Ok(d)
            } else {
                Ok(z.exp() * t)
            }
        }
        (Ok((d, _)), Err(_)) => Ok(d),
        (Err(_), Ok((t, _))) => Ok(z.exp() * t),
        (Err(e), Err(_)) => Err(e),
    }
}

/// Direct power series of 1F1(a; b; z).
pub fn kummer_1f1_direct(a: f64, b: f64, z: f64) -> Result<f64> {
    kummer_1f1_with_magnitude(a, b, z).map(|(value, _)| value)
}

/// Direct series together with sum_k |term_k|.
pub(crate) fn kummer_1f1_with_magnitude(a: f64, b: f64, z: f64) -> Result<(f64, f64)> {
    if is_nonpositive_integer(b) {
        return Err(Error::DegenerateParameters(format!(
            "1F1 lower parameter b = {b} is a nonpositive integer"
        )));
    }
    let mut sum = CompensatedSum::default();
    sum.add(1.0);
    let mut magnitude = 1.0;
    let mut term = 1.0;
    // past this index the term ratio shrinks monotonically in magnitude
    let settled = a.abs().max(b.abs()).max(z.abs());
    for k in 0..KUMMER_MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * z / (kf + 1.0);
        if term == 0.0 {
            return Ok((sum.value(), magnitude));
        }
        sum.add(term);
        magnitude += term.abs();
        if kf + 1.0 > settled && term.abs() < KUMMER_REL_TOL * sum.value().abs() {
            return Ok((sum.value(), magnitude));
        }
    }
    Err(Error::ConvergenceFailure {
        terms: KUMMER_MAX_TERMS,
    })
}

/// 1F1(a; b; z) through Kummer's transformation e^z 1F1(b - a; b; -z).
pub fn kummer_1f1_transformed(a: f64, b: f64, z: f64) -> Result<f64> {
    Ok(z.exp() * kummer_1f1_direct(b - a, b, -z)?)
}

fn ln_gamma_one_plus(z: f64) -> f64 {
    let mut power = z;
    let mut sum = CompensatedSum::default();
    sum.add(-EULER_GAMMA * z);
    for (i, zeta) in ZETA.iter().enumerate() {
        let k = i + 2;
        power *= z;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum.add(sign * zeta * power / k as f64);
    }
    sum.value()
}

fn ln_gamma_stirling(y: f64) -> f64 {
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut correction = 0.0;
    let mut power = inv;
    for c in STIRLING {
        correction += c * power;
        power *= inv2;
    }
    (y - 0.5) * y.ln() - y + LN_SQRT_2PI + correction
}

/// Natural logarithm of the gamma function for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::DomainError(format!(
            "ln_gamma requires x > 0, got {x}"
        )));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if (x - 1.0).abs() < 0.2 {
        return Ok(ln_gamma_one_plus(x - 1.0));
    }
    if (x - 2.0).abs() < 0.2 {
        let z = x - 2.0;
        return Ok(z.ln_1p() + ln_gamma_one_plus(z));
    }
    let mut y = x;
    let mut product = 1.0;
    while y < 7.0 {
        product *= y;
        y += 1.0;
    }
    Ok(ln_gamma_stirling(y) - product.ln())
}

/// Rising factorial (a)_k = a (a + 1) ... (a + k - 1).
pub fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}
