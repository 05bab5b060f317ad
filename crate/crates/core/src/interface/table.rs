//! Serialized reference quantities at one energy: H0, Omega, Jmat and the
//! coefficients s_n, c_n, T_n, R_n⁺.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::basis::{h0_matrix, omega_matrix, TridiagonalRepr};
use crate::coefficients::{coefficient_pair, kinematical, sine_like};
use crate::error::{Error, Result};
use crate::kinematics::{kinematic_state, ChannelConfig};
use crate::specfun::MAX_DEGREE;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalJson {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl From<&TridiagonalRepr> for TridiagonalJson {
    fn from(t: &TridiagonalRepr) -> Self {
        Self {
            diag: t.diag.clone(),
            offdiag: t.offdiag.clone(),
        }
    }
}

impl TridiagonalJson {
    pub fn to_repr(&self) -> Result<TridiagonalRepr> {
        TridiagonalRepr::new(self.diag.clone(), self.offdiag.clone())
    }
}

/// Everything `emit-table` writes. Complex numbers are `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDump {
    pub channel: ChannelConfig,
    pub epsilon: f64,
    pub c_value: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub eta: f64,
    pub n_max: usize,
    pub h0: TridiagonalJson,
    pub omega: TridiagonalJson,
    pub jmat: TridiagonalJson,
    /// Sine-like s_n from the closed forms.
    pub s: Vec<f64>,
    /// Cosine-like c_n from the Jmat recursion.
    pub c: Vec<f64>,
    #[serde(rename = "T")]
    pub t: Vec<[f64; 2]>,
    /// R_n⁺ for n = 1..=n_max.
    #[serde(rename = "R_plus")]
    pub r_plus: Vec<[f64; 2]>,
}

/// Build the table for rows 0..=n_max.
pub fn emit_table(cfg: &ChannelConfig, epsilon: f64, n_max: usize) -> Result<TableDump> {
    build_table(cfg, epsilon, n_max, |_| {})
}

/// Same as `emit_table`, with a hook that may alter Omega before Jmat is formed.
pub fn build_table(
    cfg: &ChannelConfig,
    epsilon: f64,
    n_max: usize,
    omega_hook: impl FnOnce(&mut TridiagonalRepr),
) -> Result<TableDump> {
    cfg.validate()?;
    if n_max + 1 > MAX_DEGREE {
        return Err(Error::CapExceeded {
            degree: n_max + 1,
            cap: MAX_DEGREE,
        });
    }
    let state = kinematic_state(epsilon, cfg)?;
    let size = n_max + 1;
    let h0 = h0_matrix(size + 1, cfg, state.c_value)?;
    let mut omega = omega_matrix(size + 1, cfg, state.c_value)?;
    omega_hook(&mut omega);
    let jmat = h0.add_scaled(-epsilon, &omega);
    let mut pair = coefficient_pair(&state, cfg, &jmat)?;
    pair.s = (0..size)
        .map(|n| sine_like(n, &state, cfg))
        .collect::<Result<_>>()?;
    pair.c.truncate(size);
    let kin = kinematical(&pair)?;
    let complex = |z: &num_complex::Complex64| [z.re, z.im];
    Ok(TableDump {
        channel: *cfg,
        epsilon,
        c_value: state.c_value,
        k: state.k,
        eta: state.eta,
        n_max,
        h0: (&h0.truncated(size)).into(),
        omega: (&omega.truncated(size)).into(),
        jmat: (&jmat.truncated(size)).into(),
        s: pair.s,
        c: pair.c,
        t: kin.t.iter().map(complex).collect(),
        r_plus: kin.r_plus.iter().map(complex).collect(),
    })
}

impl TableDump {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let table: TableDump =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        table.validate()?;
        Ok(table)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        let size = self.n_max + 1;
        let shapes = [
            ("h0.diag", self.h0.diag.len(), size),
            ("h0.offdiag", self.h0.offdiag.len(), size - 1),
            ("omega.diag", self.omega.diag.len(), size),
            ("omega.offdiag", self.omega.offdiag.len(), size - 1),
            ("jmat.diag", self.jmat.diag.len(), size),
            ("jmat.offdiag", self.jmat.offdiag.len(), size - 1),
            ("s", self.s.len(), size),
            ("c", self.c.len(), size),
            ("T", self.t.len(), size),
            ("R_plus", self.r_plus.len(), size - 1),
        ];
        for (name, got, want) in shapes {
            if got != want {
                return Err(Error::InvalidConfig(format!(
                    "table field {name} has inconsistent length for n_max = {}",
                    self.n_max
                )));
            }
        }
        self.jmat.to_repr()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::j_matrix;
    use crate::kinematics::{Basis, CRule};

    #[test]
    fn shape_contract() {
        let cfg = ChannelConfig::new(Basis::Laguerre, 1, 1.0, 1.0, CRule::Balance).unwrap();
        let table = emit_table(&cfg, 1.4, 3).unwrap();
        assert_eq!(table.s.len(), 4);
        assert_eq!(table.c.len(), 4);
        assert_eq!(table.t.len(), 4);
        assert_eq!(table.r_plus.len(), 3);
        assert_eq!(table.jmat.diag.len(), 4);
        assert_eq!(table.jmat.offdiag.len(), 3);
        let direct = j_matrix(1.4, 4, &cfg).unwrap();
        assert_eq!(table.jmat.to_repr().unwrap(), direct);
    }

    #[test]
    fn zero_energy_gives_h0() {
        // with C well above alpha the scattering energies straddle zero
        let cfg = ChannelConfig::new(Basis::Oscillator, 2, 1.0, 0.5, CRule::Fixed(2.0)).unwrap();
        let table = emit_table(&cfg, 0.0, 5).unwrap();
        assert_eq!(table.jmat, table.h0);
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let cfg = ChannelConfig::new(Basis::Oscillator, 3, 0.7, 0.1, CRule::Balance).unwrap();
        let table = emit_table(&cfg, 1.02, 12).unwrap();
        let again = TableDump::from_json(&table.to_json()).unwrap();
        assert_eq!(table, again);
    }

    #[test]
    fn rejects_truncated_arrays() {
        let cfg = ChannelConfig::new(Basis::Laguerre, 2, 1.0, 1.0, CRule::Balance).unwrap();
        let mut table = emit_table(&cfg, 1.4, 4).unwrap();
        table.c.pop();
        assert!(TableDump::from_json(&table.to_json()).is_err());
    }
}
