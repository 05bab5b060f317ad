//! Built-in invariant suites: unitarity, recursion residuals, zero-padding
//! nesting, N-independence, quadrature overlaps and special-function
//! oracles.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::basis::SeparablePotential;
use crate::coefficients::{recursion_residuals, verify_against_closed_form, CoefficientPair};
use crate::error::Result;
use crate::interface::table::{build_table, TableDump};
use crate::kinematics::{energy_for_wavenumber, kinematic_state, Basis, CRule, ChannelConfig};
use crate::phase_analytic::s_matrix_analytic;
use crate::phase_numeric::s_matrix_numeric;
use crate::quadrature::upper_overlap;
use crate::specfun::{
    gauss_2f1_with_magnitude, gegenbauer, kummer_1f1_direct, kummer_1f1_transformed, laguerre,
    ln_gamma, pochhammer,
};

pub const UNITARITY_TOL: f64 = 1e-10;
pub const RECURSION_TOL: f64 = 1e-9;
pub const NESTING_TOL: f64 = 1e-10;
pub const N_INDEPENDENCE_TOL: f64 = 1e-8;
pub const QUADRATURE_TOL: f64 = 1e-8;
pub const SPECFUN_TOL: f64 = 1e-11;

/// Highest coefficient index in the recursion suite; rows 0..RECURSION_ROWS are checked.
pub const RECURSION_ROWS: usize = 50;

/// Relative size of the Omega perturbation applied by the fault-injection hook.
pub const CORRUPTION: f64 = 1e-6;

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    /// Largest deviation observed.
    pub worst: f64,
    pub tolerance: f64,
    /// Evaluation errors and failing cases, if any.
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            cases: 0,
            worst: 0.0,
            tolerance,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, label: impl FnOnce() -> String, deviation: f64) {
        self.cases += 1;
        if deviation > self.worst || deviation.is_nan() {
            self.worst = deviation;
        }
        if !(deviation < self.tolerance) {
            self.failures.push(format!("{}: {deviation:.3e}", label()));
        }
    }

    fn record_error(&mut self, label: impl FnOnce() -> String, err: impl std::fmt::Display) {
        self.cases += 1;
        self.failures.push(format!("{}: {err}", label()));
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub suites: Vec<SuiteResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    /// Pass/fail table, followed by up to five failure messages per suite.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<20} {:>6} {:>12} {:>10}  result",
            "suite", "cases", "worst", "tolerance"
        );
        for suite in &self.suites {
            let _ = writeln!(
                out,
                "{:<20} {:>6} {:>12.3e} {:>10.1e}  {}",
                suite.name,
                suite.cases,
                suite.worst,
                suite.tolerance,
                if suite.passed() { "PASS" } else { "FAIL" }
            );
        }
        for suite in self.suites.iter().filter(|s| !s.failures.is_empty()) {
            for failure in suite.failures.iter().take(5) {
                let _ = writeln!(out, "  {}: {failure}", suite.name);
            }
            if suite.failures.len() > 5 {
                let _ = writeln!(
                    out,
                    "  {}: ... {} more",
                    suite.name,
                    suite.failures.len() - 5
                );
            }
        }
        out
    }
}

/// Channels checked when none are given: kappa 1..3 in both bases.
pub fn default_channels() -> Vec<ChannelConfig> {
    let mut out = Vec::new();
    for basis in [Basis::Laguerre, Basis::Oscillator] {
        for kappa in 1..=3 {
            out.push(ChannelConfig {
                basis,
                kappa,
                lambda: 1.0,
                alpha: 1.0,
                c_rule: CRule::Balance,
            });
        }
    }
    out
}

/// Reduced wavenumbers eta = K / lambda probed for each channel.
const CHECK_ETAS: [f64; 3] = [0.35, 1.0, 2.2];

fn check_energies(cfg: &ChannelConfig) -> Result<Vec<f64>> {
    CHECK_ETAS
        .iter()
        .map(|eta| energy_for_wavenumber(eta * cfg.lambda, cfg))
        .collect()
}

fn potentials() -> [SeparablePotential; 4] {
    let p = |rows: &[&[f64]]| {
        SeparablePotential::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .expect("built-in potential is symmetric")
    };
    [
        p(&[&[2.5]]),
        p(&[&[1.5, -0.8], &[-0.8, -2.0]]),
        p(&[&[-1.2, 0.6, 0.3], &[0.6, 2.2, -0.9], &[0.3, -0.9, 0.7]]),
        p(&[
            &[0.8, -0.4, 0.2, 0.1],
            &[-0.4, -1.5, 0.7, -0.3],
            &[0.2, 0.7, 1.1, 0.5],
            &[0.1, -0.3, 0.5, -0.6],
        ]),
    ]
}

fn channel_label(cfg: &ChannelConfig) -> String {
    format!(
        "{} kappa={} lambda={}",
        cfg.basis.name(),
        cfg.kappa,
        cfg.lambda
    )
}

/// Run every suite over `channels` (the defaults when empty). `corrupt_omega`
/// perturbs Omega's diagonal at that row in the recursion suite.
pub fn run_check(channels: &[ChannelConfig], corrupt_omega: Option<usize>) -> CheckReport {
    let defaults;
    let channels = if channels.is_empty() {
        defaults = default_channels();
        &defaults[..]
    } else {
        channels
    };
    CheckReport {
        suites: vec![
            unitarity_suite(channels),
            recursion_suite(channels, corrupt_omega),
            nesting_suite(channels),
            n_independence_suite(channels),
            quadrature_suite(channels),
            specfun_suite(),
        ],
    }
}

/// Recursion suite over previously emitted tables.
pub fn run_table_check(tables: &[TableDump]) -> CheckReport {
    let mut suite = SuiteResult::new("recursion", RECURSION_TOL);
    for table in tables {
        record_recursion(&mut suite, table);
    }
    CheckReport {
        suites: vec![suite],
    }
}

fn unitarity_suite(channels: &[ChannelConfig]) -> SuiteResult {
    let mut suite = SuiteResult::new("unitarity", UNITARITY_TOL);
    let pots = potentials();
    for cfg in channels {
        let energies = match check_energies(cfg) {
            Ok(e) => e,
            Err(err) => {
                suite.record_error(|| channel_label(cfg), err);
                continue;
            }
        };
        for &eps in &energies {
            for v in &pots {
                let m = v.m();
                let label = || format!("{} eps={eps} M={m}", channel_label(cfg));
                if m <= 3 {
                    match s_matrix_analytic(eps, v, cfg) {
                        Ok(p) => suite.record(
                            || format!("{} analytic", label()),
                            (p.s_value.norm() - 1.0).abs(),
                        ),
                        Err(err) => suite.record_error(label, err),
                    }
                }
                match s_matrix_numeric(eps, v, m + 3, cfg) {
                    Ok(p) => suite.record(
                        || format!("{} numeric", label()),
                        (p.s_value.norm() - 1.0).abs(),
                    ),
                    Err(err) => suite.record_error(label, err),
                }
            }
        }
    }
    suite
}

/// Residuals of one table: the closed-form s_n against the Jmat recursion
/// on rows 0..n_max-1, the recursion c_n on rows 1..n_max-1, and the
/// recursion c_n against its closed form where that is trustworthy.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionCase {
    pub sine: f64,
    pub cosine: f64,
    pub closed_form: std::result::Result<(), String>,
}

pub fn recursion_case(table: &TableDump) -> Result<RecursionCase> {
    let jmat = table.jmat.to_repr()?;
    let last = table.n_max - 1;
    let worst = |v: Vec<f64>| v.into_iter().fold(0.0f64, f64::max);
    let sine = worst(recursion_residuals(&jmat, &table.s, 0..=last));
    let cosine = if last >= 1 {
        worst(recursion_residuals(&jmat, &table.c, 1..=last))
    } else {
        0.0
    };
    let state = kinematic_state(table.epsilon, &table.channel)?;
    let pair = CoefficientPair {
        s: table.s.clone(),
        c: table.c.clone(),
    };
    let closed_form =
        verify_against_closed_form(&state, &table.channel, &pair).map_err(|e| e.to_string());
    Ok(RecursionCase {
        sine,
        cosine,
        closed_form,
    })
}

fn record_recursion(suite: &mut SuiteResult, table: &TableDump) {
    let label = || format!("{} eps={}", channel_label(&table.channel), table.epsilon);
    match recursion_case(table) {
        Ok(case) => {
            suite.record(|| format!("{} sine", label()), case.sine);
            suite.record(|| format!("{} cosine", label()), case.cosine);
            if let Err(msg) = case.closed_form {
                suite.record_error(|| format!("{} closed form", label()), msg);
            }
        }
        Err(err) => suite.record_error(label, err),
    }
}

fn recursion_suite(channels: &[ChannelConfig], corrupt_omega: Option<usize>) -> SuiteResult {
    let mut suite = SuiteResult::new("recursion", RECURSION_TOL);
    for cfg in channels {
        let energies = match check_energies(cfg) {
            Ok(e) => e,
            Err(err) => {
                suite.record_error(|| channel_label(cfg), err);
                continue;
            }
        };
        for eps in energies {
            let table = build_table(cfg, eps, RECURSION_ROWS + 1, |omega| {
                if let Some(row) = corrupt_omega {
                    if row < omega.diag.len() {
                        omega.diag[row] *= 1.0 + CORRUPTION;
                    }
                }
            });
            match table {
                Ok(table) => record_recursion(&mut suite, &table),
                Err(err) => suite.record_error(|| format!("{} eps={eps}", channel_label(cfg)), err),
            }
        }
    }
    suite
}

fn nesting_suite(channels: &[ChannelConfig]) -> SuiteResult {
    let mut suite = SuiteResult::new("nesting", NESTING_TOL);
    let pots = potentials();
    for cfg in channels {
        let Ok(energies) = check_energies(cfg) else {
            suite.record_error(|| channel_label(cfg), "no check energies");
            continue;
        };
        for &eps in &energies {
            for small in &pots[..2] {
                let m = small.m();
                let label =
                    || format!("{} eps={eps} M={m} padded to {}", channel_label(cfg), m + 1);
                let pair = s_matrix_analytic(eps, small, cfg)
                    .and_then(|a| Ok((a, s_matrix_analytic(eps, &small.padded(m + 1), cfg)?)));
                match pair {
                    Ok((a, b)) => suite.record(label, (a.s_value - b.s_value).norm()),
                    Err(err) => suite.record_error(label, err),
                }
            }
        }
    }
    suite
}

fn n_independence_suite(channels: &[ChannelConfig]) -> SuiteResult {
    let mut suite = SuiteResult::new("n_independence", N_INDEPENDENCE_TOL);
    let pots = potentials();
    for cfg in channels {
        let Ok(energies) = check_energies(cfg) else {
            suite.record_error(|| channel_label(cfg), "no check energies");
            continue;
        };
        for &eps in &energies {
            for v in &pots {
                let m = v.m();
                let label = || format!("{} eps={eps} M={m}", channel_label(cfg));
                let reference: Result<Complex64> = if m <= 3 {
                    s_matrix_analytic(eps, v, cfg).map(|p| p.s_value)
                } else {
                    s_matrix_numeric(eps, v, m + 2, cfg).map(|p| p.s_value)
                };
                let reference = match reference {
                    Ok(s) => s,
                    Err(err) => {
                        suite.record_error(label, err);
                        continue;
                    }
                };
                for n in [m, m + 3, m + 10] {
                    match s_matrix_numeric(eps, v, n, cfg) {
                        Ok(p) => suite.record(
                            || format!("{} N={n}", label()),
                            (p.s_value - reference).norm(),
                        ),
                        Err(err) => suite.record_error(|| format!("{} N={n}", label()), err),
                    }
                }
            }
        }
    }
    suite
}

/// The part of Omega that does not depend on C: the upper-component overlaps.
pub fn upper_overlap_expected(n: usize, m: usize, cfg: &ChannelConfig) -> f64 {
    let (lo, hi) = (n.min(m), n.max(m));
    let kappa = cfg.kappa_f64();
    match cfg.basis {
        Basis::Laguerre => match hi - lo {
            0 => 2.0 * (kappa + lo as f64 + 1.0),
            1 => -((lo as f64 + 1.0) * (2.0 * kappa + lo as f64 + 2.0)).sqrt(),
            _ => 0.0,
        },
        Basis::Oscillator => f64::from(u8::from(n == m)),
    }
}

fn quadrature_suite(channels: &[ChannelConfig]) -> SuiteResult {
    let mut suite = SuiteResult::new("quadrature", QUADRATURE_TOL);
    let mut seen: Vec<(Basis, u32, u64)> = Vec::new();
    for cfg in channels {
        let key = (cfg.basis, cfg.kappa, cfg.lambda.to_bits());
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        for n in 0..=5 {
            for m in n..=5 {
                let label = || format!("{} n={n} m={m}", channel_label(cfg));
                match upper_overlap(n, m, cfg) {
                    Ok(value) => {
                        suite.record(label, (value - upper_overlap_expected(n, m, cfg)).abs())
                    }
                    Err(err) => suite.record_error(label, err),
                }
            }
        }
    }
    suite
}

/// Sum with the ratio sum|terms| / |sum|, used to scale tolerances.
fn sum_with_cancellation(terms: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut sum, mut magnitude) = (0.0, 0.0);
    for t in terms {
        sum += t;
        magnitude += t.abs();
    }
    let ratio = if sum == 0.0 {
        1.0
    } else {
        (magnitude / sum.abs()).max(1.0)
    };
    (sum, ratio)
}

fn laguerre_explicit(n: usize, mu: f64, x: f64) -> (f64, f64) {
    // sum_k (-1)^k binom(n + mu, n - k) x^k / k!
    let mut term: f64 = (1..=n).map(|j| (mu + j as f64) / j as f64).product();
    let terms = (0..=n).map(move |k| {
        let current = term;
        term *= -x * (n - k) as f64 / ((mu + k as f64 + 1.0) * (k as f64 + 1.0));
        current
    });
    sum_with_cancellation(terms)
}

fn gegenbauer_explicit(n: usize, nu: f64, x: f64) -> (f64, f64) {
    // sum_k (-1)^k (nu)_{n-k} / (k! (n-2k)!) (2x)^{n-2k}
    let factorial = |k: usize| (1..=k).map(|j| j as f64).product::<f64>();
    let terms = (0..=n / 2).map(|k| {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sign * pochhammer(nu, n - k) / (factorial(k) * factorial(n - 2 * k))
            * (2.0 * x).powi((n - 2 * k) as i32)
    });
    sum_with_cancellation(terms)
}

fn relative(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

fn specfun_suite() -> SuiteResult {
    let mut suite = SuiteResult::new("special_functions", SPECFUN_TOL);
    let degrees = [0usize, 1, 2, 5, 10, 20];
    // each deviation is divided by the explicit sum's cancellation ratio
    for &n in &degrees {
        for mu in [0.5, 1.5, 2.5, 3.5] {
            for x in [0.1, 0.7, 2.0, 5.0] {
                let label = || format!("laguerre n={n} mu={mu} x={x}");
                let (want, cancel) = laguerre_explicit(n, mu, x);
                match laguerre(n, mu, x) {
                    Ok(got) => suite.record(label, relative(got, want) / cancel),
                    Err(err) => suite.record_error(label, err),
                }
                // L_n^mu(x) = binom(n + mu, n) 1F1(-n; mu + 1; x)
                let label = || format!("kummer vs laguerre n={n} mu={mu} x={x}");
                let binom: f64 = (1..=n).map(|j| (mu + j as f64) / j as f64).product();
                match kummer_1f1_direct(-(n as f64), mu + 1.0, x) {
                    Ok(got) => suite.record(label, relative(binom * got, want) / cancel),
                    Err(err) => suite.record_error(label, err),
                }
            }
        }
        for nu in [1.0, 2.0, 3.5] {
            for x in [-0.9, -0.3, 0.2, 0.75, 1.0] {
                let label = || format!("gegenbauer n={n} nu={nu} x={x}");
                let (want, cancel) = gegenbauer_explicit(n, nu, x);
                match gegenbauer(n, nu, x) {
                    Ok(got) => suite.record(label, relative(got, want) / cancel),
                    Err(err) => suite.record_error(label, err),
                }
                // C_n^nu(x) = (2 nu)_n / n! 2F1(-n, n + 2 nu; nu + 1/2; (1 - x) / 2)
                let label = || format!("2F1 vs gegenbauer n={n} nu={nu} x={x}");
                let prefactor =
                    pochhammer(2.0 * nu, n) / (1..=n).map(|j| j as f64).product::<f64>();
                match gauss_2f1_with_magnitude(
                    -(n as i64),
                    n as f64 + 2.0 * nu,
                    nu + 0.5,
                    0.5 * (1.0 - x),
                ) {
                    Ok((got, magnitude)) => {
                        let own = if got == 0.0 {
                            1.0
                        } else {
                            (magnitude / got.abs()).max(1.0)
                        };
                        suite.record(label, relative(prefactor * got, want) / cancel.max(own))
                    }
                    Err(err) => suite.record_error(label, err),
                }
            }
        }
    }
    // the two 1F1 evaluation routes agree where the direct series is benign
    for (a, b) in [(-2.5, 0.5), (-4.5, -0.5), (0.7, 1.9), (-1.5, -1.5)] {
        for z in [-0.5, -2.0, -4.0] {
            let label = || format!("kummer routes a={a} b={b} z={z}");
            match (kummer_1f1_direct(a, b, z), kummer_1f1_transformed(a, b, z)) {
                (Ok(d), Ok(t)) => suite.record(label, relative(d, t)),
                (Err(err), _) | (_, Err(err)) => suite.record_error(label, err),
            }
        }
    }
    // ln Gamma: recurrence and exact values
    for x in [0.05, 0.5, 1.3, 2.7, 9.9, 31.0] {
        let label = || format!("ln_gamma recurrence x={x}");
        match (ln_gamma(x), ln_gamma(x + 1.0)) {
            (Ok(a), Ok(b)) => suite.record(label, ((b - a) - x.ln()).abs() / b.abs().max(1.0)),
            (Err(err), _) | (_, Err(err)) => suite.record_error(label, err),
        }
    }
    let exact = [
        (0.5, 0.5 * std::f64::consts::PI.ln()),
        (5.0, 24f64.ln()),
        (11.0, 3_628_800f64.ln()),
    ];
    for (x, want) in exact {
        let label = || format!("ln_gamma x={x}");
        match ln_gamma(x) {
            Ok(got) => suite.record(label, relative(got, want)),
            Err(err) => suite.record_error(label, err),
        }
    }
    suite
}
