//! Energy-grid sweeps with per-point status labels, CSV and JSON output.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interface::config::{MethodChoice, OutputFormat, RunConfig};
use crate::kinematics::{kinematic_state, KinematicState};
use crate::phase_analytic::{s_matrix_analytic, unwrap_taus, SMatrixPoint};
use crate::phase_numeric::s_matrix_numeric;

/// Per-row outcome; the set is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Ok,
    NotScattering,
    SingularInner,
    NearSingularFormula,
}

impl PointStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::NotScattering => "not_scattering",
            PointStatus::SingularInner => "singular_inner",
            PointStatus::NearSingularFormula => "near_singular_formula",
        }
    }

    fn from_error(err: &Error) -> Self {
        match err {
            Error::SingularInnerSystem { .. } => PointStatus::SingularInner,
            Error::NearSingularFormula { .. } => PointStatus::NearSingularFormula,
            _ => PointStatus::NotScattering,
        }
    }
}

/// One output row. Value fields are `None` unless `status` is ok; K and eta
/// are filled whenever the energy is in the scattering domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub epsilon: f64,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub eta: Option<f64>,
    pub tau_principal: Option<f64>,
    pub tau_unwrapped: Option<f64>,
    #[serde(rename = "re_S")]
    pub re_s: Option<f64>,
    #[serde(rename = "im_S")]
    pub im_s: Option<f64>,
    pub method: Option<&'static str>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub status: PointStatus,
    /// |S_analytic - S_numeric| in comparison mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_diff_s: Option<f64>,
}

impl ScanRow {
    fn failed(epsilon: f64, state: Option<&KinematicState>, status: PointStatus) -> Self {
        Self {
            epsilon,
            k: state.map(|s| s.k),
            eta: state.map(|s| s.eta),
            tau_principal: None,
            tau_unwrapped: None,
            re_s: None,
            im_s: None,
            method: None,
            n: None,
            status,
            abs_diff_s: None,
        }
    }

    fn from_point(state: &KinematicState, point: &SMatrixPoint) -> Self {
        Self {
            epsilon: state.epsilon,
            k: Some(state.k),
            eta: Some(state.eta),
            tau_principal: Some(point.tau),
            tau_unwrapped: None,
            re_s: Some(point.s_value.re),
            im_s: Some(point.s_value.im),
            method: Some(point.method.name()),
            n: point.method.truncation(),
            status: PointStatus::Ok,
            abs_diff_s: None,
        }
    }
}

/// Rows in grid order plus summary data.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub comparison: bool,
    /// Grid indices where the phase jump was ambiguous; unwrapping restarts there.
    pub unwrap_breaks: Vec<usize>,
}

impl ScanReport {
    pub fn succeeded(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.status == PointStatus::Ok)
            .count()
    }

    /// Largest |S_analytic - S_numeric| over the grid in comparison mode.
    pub fn max_abs_diff(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter_map(|r| r.abs_diff_s)
            .fold(None, |m, d| Some(m.map_or(d, |m: f64| m.max(d))))
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("epsilon,K,eta,tau_principal,tau_unwrapped,re_S,im_S,method,N,status");
        if self.comparison {
            out.push_str(",abs_diff_s");
        }
        out.push('\n');
        for row in &self.rows {
            let fields = [
                num(Some(row.epsilon)),
                num(row.k),
                num(row.eta),
                num(row.tau_principal),
                num(row.tau_unwrapped),
                num(row.re_s),
                num(row.im_s),
                row.method.unwrap_or("").to_string(),
                row.n.map(|n| n.to_string()).unwrap_or_default(),
                row.status.as_str().to_string(),
            ];
            out.push_str(&fields.join(","));
            if self.comparison {
                let _ = write!(out, ",{}", num(row.abs_diff_s));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Summary {
            points: usize,
            ok: usize,
            #[serde(skip_serializing_if = "Option::is_none")]
            max_abs_diff_s: Option<f64>,
            unwrap_breaks: Vec<usize>,
        }
        #[derive(Serialize)]
        struct Document<'a> {
            rows: &'a [ScanRow],
            summary: Summary,
        }
        let doc = Document {
            rows: &self.rows,
            summary: Summary {
                points: self.rows.len(),
                ok: self.succeeded(),
                max_abs_diff_s: self.max_abs_diff(),
                unwrap_breaks: self.unwrap_breaks.clone(),
            },
        };
        serde_json::to_string_pretty(&doc).expect("scan report serializes") + "\n"
    }
}

/// 17 significant digits, empty for missing values.
fn num(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

/// Closed form with automatic fallback to the numeric path at N = M + 3.
fn analytic_with_fallback(epsilon: f64, config: &RunConfig) -> Result<SMatrixPoint> {
    match s_matrix_analytic(epsilon, &config.potential, &config.channel) {
        Err(Error::NearSingularFormula { term, magnitude }) => s_matrix_numeric(
            epsilon,
            &config.potential,
            config.fallback_truncation(),
            &config.channel,
        )
        .map_err(|_| Error::NearSingularFormula { term, magnitude }),
        other => other,
    }
}

fn evaluate(epsilon: f64, config: &RunConfig) -> ScanRow {
    let state = match kinematic_state(epsilon, &config.channel) {
        Ok(state) => state,
        Err(_) => return ScanRow::failed(epsilon, None, PointStatus::NotScattering),
    };
    let numeric = |n: usize| s_matrix_numeric(epsilon, &config.potential, n, &config.channel);
    let (primary, secondary) = match config.method {
        MethodChoice::Analytic => (analytic_with_fallback(epsilon, config), None),
        MethodChoice::Numeric(n) => (numeric(n), None),
        MethodChoice::Both(n) => (analytic_with_fallback(epsilon, config), Some(numeric(n))),
    };
    match primary {
        Ok(point) => {
            let mut row = ScanRow::from_point(&state, &point);
            if let Some(Ok(other)) = secondary {
                row.abs_diff_s = Some((point.s_value - other.s_value).norm());
            }
            row
        }
        Err(err) => ScanRow::failed(epsilon, Some(&state), PointStatus::from_error(&err)),
    }
}

/// Unwrap taus, restarting at ambiguous jumps; returns values and break indices
/// (positions within `taus`).
fn unwrap_with_breaks(taus: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut out: Vec<f64> = Vec::with_capacity(taus.len());
    let mut breaks = Vec::new();
    let mut start = 0;
    while start < taus.len() {
        match unwrap_taus(&taus[start..]) {
            Ok(values) => {
                let shift = segment_shift(&out, values[0]);
                out.extend(values.iter().map(|v| v + shift));
                break;
            }
            Err(Error::GridTooCoarse { index }) => {
                let values = unwrap_taus(&taus[start..start + index]).expect("prefix unwraps");
                let shift = segment_shift(&out, values[0]);
                out.extend(values.iter().map(|v| v + shift));
                breaks.push(start + index);
                start += index;
            }
            Err(_) => unreachable!("unwrap only reports coarse grids"),
        }
    }
    (out, breaks)
}

// multiple of pi that puts a new segment's first value nearest the previous value
fn segment_shift(previous: &[f64], first: f64) -> f64 {
    match previous.last() {
        Some(&last) => ((last - first) / std::f64::consts::PI).round() * std::f64::consts::PI,
        None => 0.0,
    }
}

/// Evaluate every grid point, using `jobs` worker threads when given.
pub fn run_scan(config: &RunConfig, jobs: Option<usize>) -> Result<ScanReport> {
    config.validate()?;
    let energies = config.grid.energies();
    let compute =
        || -> Vec<ScanRow> { energies.par_iter().map(|&e| evaluate(e, config)).collect() };
    let mut rows = match jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::InvalidConfig(format!("cannot start {k} worker threads: {e}")))?
            .install(compute),
        None => compute(),
    };
    let ok_indices: Vec<usize> = (0..rows.len())
        .filter(|&i| rows[i].status == PointStatus::Ok)
        .collect();
    let taus: Vec<f64> = ok_indices
        .iter()
        .map(|&i| rows[i].tau_principal.unwrap())
        .collect();
    let (unwrapped, breaks) = unwrap_with_breaks(&taus);
    for (&i, &tau) in ok_indices.iter().zip(&unwrapped) {
        rows[i].tau_unwrapped = Some(tau);
    }
    Ok(ScanReport {
        rows,
        comparison: matches!(config.method, MethodChoice::Both(_)),
        unwrap_breaks: breaks.iter().map(|&b| ok_indices[b]).collect(),
    })
}

/// Complex S of an ok row.
pub fn row_s_value(row: &ScanRow) -> Option<Complex64> {
    Some(Complex64::new(row.re_s?, row.im_s?))
}
