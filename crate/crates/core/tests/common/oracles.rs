//! Brute-force special-function oracles in exact or wide fixed-point arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact value of a finite sum together with the sum of term magnitudes.
pub struct ExactSum {
    pub value: BigRational,
    pub magnitude: BigRational,
}

impl ExactSum {
    fn from_terms(terms: impl Iterator<Item = BigRational>) -> Self {
        let mut value = BigRational::zero();
        let mut magnitude = BigRational::zero();
        for t in terms {
            magnitude += t.abs();
            value += t;
        }
        Self { value, magnitude }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().expect("finite")
    }

    /// sum |terms| / |sum|; infinite for an exact zero.
    pub fn condition(&self) -> f64 {
        if self.value.is_zero() {
            return f64::INFINITY;
        }
        (&self.magnitude / self.value.abs())
            .to_f64()
            .expect("finite")
    }
}

pub fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input")
}

fn int(k: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// L_n^mu(x) = sum_k (-1)^k binom(n + mu, n - k) x^k / k!.
pub fn laguerre_exact(n: usize, mu: f64, x: f64) -> ExactSum {
    let (mu, x) = (rat(mu), rat(x));
    let mut term = BigRational::one();
    for j in 1..=n {
        term = term * (&mu + int(j)) / int(j);
    }
    let mut terms = Vec::with_capacity(n + 1);
    for k in 0..=n {
        terms.push(term.clone());
        if k < n {
            term = -term * &x * int(n - k) / ((&mu + int(k + 1)) * int(k + 1));
        }
    }
    ExactSum::from_terms(terms.into_iter())
}

/// C_n^nu(x) = sum_k (-1)^k (nu)_{n-k} / (k! (n - 2k)!) (2x)^{n-2k}.
pub fn gegenbauer_exact(n: usize, nu: f64, x: f64) -> ExactSum {
    let (nu, two_x) = (rat(nu), rat(2.0 * x));
    let mut pochhammer = vec![BigRational::one()];
    let mut factorial = vec![BigRational::one()];
    let mut power = vec![BigRational::one()];
    for j in 0..n {
        pochhammer.push(&pochhammer[j] * (&nu + int(j)));
        factorial.push(&factorial[j] * int(j + 1));
        power.push(&power[j] * &two_x);
    }
    let terms = (0..=n / 2).map(|k| {
        let sign = if k % 2 == 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        sign * &pochhammer[n - k] / (&factorial[k] * &factorial[n - 2 * k]) * &power[n - 2 * k]
    });
    ExactSum::from_terms(terms)
}

/// Terminating 2F1(a, b; c; z) for a a nonpositive integer.
pub fn gauss_2f1_exact(a: i64, b: f64, c: f64, z: f64) -> ExactSum {
    assert!(a <= 0);
    let (a_r, b, c, z) = (
        BigRational::from_integer(BigInt::from(a)),
        rat(b),
        rat(c),
        rat(z),
    );
    let mut term = BigRational::one();
    let mut terms = Vec::new();
    for k in 0..=(-a) as usize {
        terms.push(term.clone());
        let kr = int(k);
        term = term * (&a_r + &kr) * (&b + &kr) * &z / ((&c + &kr) * (&kr + BigRational::one()));
    }
    ExactSum::from_terms(terms.into_iter())
}

/// Bits after the binary point in the fixed-point 1F1 oracle.
const FIXED_BITS: u32 = 400;

/// 1F1(a; b; z) summed in fixed point with `FIXED_BITS` fractional bits,
/// returning the value and sum |terms| / |sum|.
pub fn kummer_1f1_fixed(a: f64, b: f64, z: f64) -> (f64, f64) {
    let scale = BigInt::one() << FIXED_BITS;
    let (a, b, z) = (rat(a), rat(b), rat(z));
    let mut term = scale.clone();
    let mut sum = BigInt::zero();
    let mut magnitude = BigInt::zero();
    // past `bound` the terms decrease; stop once they fall below 2^-200
    let floor = BigInt::one() << (FIXED_BITS - 200);
    let bound = a.abs().to_f64().unwrap() + z.abs().to_f64().unwrap() + 10.0;
    for k in 0..20_000usize {
        magnitude += term.abs();
        sum += &term;
        let kr = int(k);
        let ratio = (&a + &kr) * &z / ((&b + &kr) * (&kr + BigRational::one()));
        if ratio.is_zero() {
            break;
        }
        term = term * ratio.numer() / ratio.denom();
        if term.is_zero() || ((k as f64) > bound && term.abs() < floor) {
            break;
        }
        assert!(k + 1 < 20_000, "fixed-point 1F1 oracle did not converge");
    }
    // results can be as small as e^-60 ~ 2^-87, far above the 2^-400 grid
    let value = BigRational::new(sum.clone(), scale.clone())
        .to_f64()
        .unwrap();
    let condition = if sum.is_zero() {
        f64::INFINITY
    } else {
        BigRational::new(magnitude, sum.abs()).to_f64().unwrap()
    };
    (value, condition)
}

/// |got - want| / |want|.
pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

/// Exact rising factorial (a)_k, correctly rounded.
pub fn pochhammer_exact(a: f64, k: usize) -> f64 {
    let a = rat(a);
    (0..k)
        .fold(BigRational::one(), |acc, j| acc * (&a + int(j)))
        .to_f64()
        .expect("finite")
}

/// ln of a positive rational as ln(m) + e ln 2 with m in [1, 2).
fn ln_rational(r: &BigRational) -> f64 {
    let e = r.numer().bits() as i64 - r.denom().bits() as i64;
    let scaled = if e >= 0 {
        r / BigRational::from_integer(BigInt::one() << e as u64)
    } else {
        r * BigRational::from_integer(BigInt::one() << (-e) as u64)
    };
    scaled.to_f64().expect("finite").ln() + e as f64 * std::f64::consts::LN_2
}

/// ln Gamma(j / 2) from the exact factorial forms
/// Gamma(n) = (n - 1)! and Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!).
pub fn ln_gamma_half_integer(j: usize) -> f64 {
    assert!(j > 0);
    let factorial = |n: usize| (1..=n).fold(BigRational::one(), |acc, i| acc * int(i));
    if j.is_multiple_of(2) {
        ln_rational(&factorial(j / 2 - 1))
    } else {
        let n = j / 2;
        let ratio = factorial(2 * n)
            / (factorial(n) * BigRational::from_integer(BigInt::one() << (2 * n) as u64));
        ln_rational(&ratio) + 0.5 * std::f64::consts::PI.ln()
    }
}
