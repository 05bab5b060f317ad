//! Run configuration: a single JSON document describing the channel, the
//! potential, the energy grid, the method and the output.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::basis::SeparablePotential;
use crate::error::{Error, Result};
use crate::kinematics::{Basis, CRule, ChannelConfig};
use crate::specfun::MAX_DEGREE;

/// Energies at which a scan is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum EnergyGrid {
    /// `points` equally spaced energies from `eps_min` to `eps_max` inclusive.
    Uniform {
        eps_min: f64,
        eps_max: f64,
        points: usize,
    },
    List(Vec<f64>),
}

impl EnergyGrid {
    pub fn energies(&self) -> Vec<f64> {
        match self {
            EnergyGrid::Uniform {
                eps_min,
                eps_max,
                points,
            } => {
                if *points == 1 {
                    return vec![*eps_min];
                }
                let step = (eps_max - eps_min) / (*points - 1) as f64;
                (0..*points)
                    .map(|i| {
                        if i + 1 == *points {
                            *eps_max
                        } else {
                            eps_min + i as f64 * step
                        }
                    })
                    .collect()
            }
            EnergyGrid::List(list) => list.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            EnergyGrid::Uniform {
                eps_min,
                eps_max,
                points,
            } => {
                if !eps_min.is_finite() || !eps_max.is_finite() {
                    return Err(Error::InvalidConfig("grid bounds must be finite".into()));
                }
                if *points == 0 {
                    return Err(Error::InvalidConfig("grid needs at least one point".into()));
                }
                if *points > 1 && !(eps_max > eps_min) {
                    return Err(Error::InvalidConfig(format!(
                        "grid must be increasing, got eps_min = {eps_min}, eps_max = {eps_max}"
                    )));
                }
            }
            EnergyGrid::List(list) => {
                if list.is_empty() {
                    return Err(Error::InvalidConfig("grid list is empty".into()));
                }
                if list.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidConfig("grid energies must be finite".into()));
                }
                if let Some(i) = (1..list.len()).find(|&i| !(list[i] > list[i - 1])) {
                    return Err(Error::InvalidConfig(format!(
                        "grid list must be strictly increasing, entry {i} ({}) follows {}",
                        list[i],
                        list[i - 1]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Which S-matrix route a scan uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Analytic,
    Numeric(usize),
    /// Closed form plus the numeric solution at truncation N for comparison.
    Both(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidConfig(format!(
                "unknown output format '{other}', expected csv or json"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Absent means standard output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

/// A validated scan configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig", into = "RawConfig")]
pub struct RunConfig {
    pub channel: ChannelConfig,
    pub potential: SeparablePotential,
    pub grid: EnergyGrid,
    pub method: MethodChoice,
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn new(
        channel: ChannelConfig,
        potential: SeparablePotential,
        grid: EnergyGrid,
        method: MethodChoice,
        output: OutputSpec,
    ) -> Result<Self> {
        let config = Self {
            channel,
            potential,
            grid,
            method,
            output,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        self.grid.validate()?;
        let m = self.potential.m();
        let check_n = |n: usize| {
            if n < m {
                return Err(Error::InvalidConfig(format!(
                    "numeric method needs N >= M, got N = {n}, M = {m}"
                )));
            }
            // coefficients up to index N + 1 are needed
            if n + 2 > MAX_DEGREE {
                return Err(Error::InvalidConfig(format!(
                    "N = {n} exceeds the supported maximum of {}",
                    MAX_DEGREE - 2
                )));
            }
            Ok(())
        };
        match self.method {
            MethodChoice::Analytic => check_analytic(m)?,
            MethodChoice::Numeric(n) => check_n(n)?,
            MethodChoice::Both(n) => {
                check_analytic(m)?;
                check_n(n)?;
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        RunConfig::try_from(raw)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run config serializes")
    }

    /// Truncation used when a closed form falls back to the numeric path.
    pub fn fallback_truncation(&self) -> usize {
        self.potential.m() + 3
    }
}

fn check_analytic(m: usize) -> Result<()> {
    if m > 3 {
        return Err(Error::InvalidConfig(format!(
            "analytic method supports M <= 3, got M = {m}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPotential {
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "V")]
    v: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eps_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eps_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    list: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawMethodType {
    Analytic,
    Numeric,
    Both,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMethod {
    #[serde(rename = "type")]
    kind: RawMethodType,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    basis: Basis,
    kappa: u32,
    lambda: f64,
    alpha: f64,
    c_rule: CRule,
    potential: RawPotential,
    grid: RawGrid,
    method: RawMethod,
    #[serde(default)]
    output: OutputSpec,
}

impl TryFrom<RawConfig> for RunConfig {
    type Error = Error;

    fn try_from(raw: RawConfig) -> Result<Self> {
        let channel = ChannelConfig::new(raw.basis, raw.kappa, raw.lambda, raw.alpha, raw.c_rule)?;
        if raw.potential.v.len() != raw.potential.m {
            return Err(Error::InvalidConfig(format!(
                "potential declares M = {} but V has {} rows",
                raw.potential.m,
                raw.potential.v.len()
            )));
        }
        let potential = SeparablePotential::from_rows(&raw.potential.v)?;
        let grid = match raw.grid {
            RawGrid {
                eps_min: Some(eps_min),
                eps_max: Some(eps_max),
                points: Some(points),
                list: None,
            } => EnergyGrid::Uniform {
                eps_min,
                eps_max,
                points,
            },
            RawGrid {
                eps_min: None,
                eps_max: None,
                points: None,
                list: Some(list),
            } => EnergyGrid::List(list),
            _ => {
                return Err(Error::InvalidConfig(
                    "grid needs either eps_min, eps_max and points, or list".into(),
                ))
            }
        };
        let m = potential.m();
        let method = match (raw.method.kind, raw.method.n) {
            (RawMethodType::Analytic, None) => MethodChoice::Analytic,
            (RawMethodType::Analytic, Some(_)) => {
                return Err(Error::InvalidConfig("analytic method takes no N".into()))
            }
            (RawMethodType::Numeric, Some(n)) => MethodChoice::Numeric(n),
            (RawMethodType::Numeric, None) => {
                return Err(Error::InvalidConfig("numeric method requires N".into()))
            }
            (RawMethodType::Both, n) => MethodChoice::Both(n.unwrap_or(m + 3)),
        };
        RunConfig::new(channel, potential, grid, method, raw.output)
    }
}

impl From<RunConfig> for RawConfig {
    fn from(config: RunConfig) -> Self {
        let ChannelConfig {
            basis,
            kappa,
            lambda,
            alpha,
            c_rule,
        } = config.channel;
        let grid = match config.grid {
            EnergyGrid::Uniform {
                eps_min,
                eps_max,
                points,
            } => RawGrid {
                eps_min: Some(eps_min),
                eps_max: Some(eps_max),
                points: Some(points),
                list: None,
            },
            EnergyGrid::List(list) => RawGrid {
                eps_min: None,
                eps_max: None,
                points: None,
                list: Some(list),
            },
        };
        let method = match config.method {
            MethodChoice::Analytic => RawMethod {
                kind: RawMethodType::Analytic,
                n: None,
            },
            MethodChoice::Numeric(n) => RawMethod {
                kind: RawMethodType::Numeric,
                n: Some(n),
            },
            MethodChoice::Both(n) => RawMethod {
                kind: RawMethodType::Both,
                n: Some(n),
            },
        };
        RawConfig {
            basis,
            kappa,
            lambda,
            alpha,
            c_rule,
            potential: RawPotential {
                m: config.potential.m(),
                v: config.potential.rows(),
            },
            grid,
            method,
            output: config.output,
        }
    }
}

/// Channel list for the check runner: a JSON array of channels, or a single
/// object carrying channel keys (a full run config qualifies).
pub fn channels_from_json(text: &str) -> Result<Vec<ChannelConfig>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let channels: Vec<ChannelConfig> = if value.is_array() {
        serde_json::from_value(value)
    } else {
        serde_json::from_value(value).map(|c| vec![c])
    }
    .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    for channel in &channels {
        channel.validate()?;
    }
    Ok(channels)
}
