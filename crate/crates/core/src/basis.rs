//! The L² spinor basis: upper component phi_n(r), the tridiagonal H0 and
//! overlap matrices, and Jmat(epsilon) = H0 - epsilon * Omega.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::kinematics::{resolve_c, Basis, ChannelConfig};
use crate::specfun::{laguerre, ln_gamma, MAX_DEGREE};

/// Symmetric tridiagonal matrix; `offdiag[i]` couples rows i and i + 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalRepr {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalRepr {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidConfig(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal entries",
                diag.len(),
                offdiag.len()
            )));
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(Error::DomainError(
                "tridiagonal entries must be finite".into(),
            ));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// Element (i, j); zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.abs_diff(j) {
            0 => self.diag[i],
            1 => self.offdiag[i.min(j)],
            _ => 0.0,
        }
    }

    /// `self + factor * other`, elementwise.
    pub fn add_scaled(&self, factor: f64, other: &TridiagonalRepr) -> TridiagonalRepr {
        assert_eq!(self.size(), other.size());
        let zip = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + factor * y).collect();
        TridiagonalRepr {
            diag: zip(&self.diag, &other.diag),
            offdiag: zip(&self.offdiag, &other.offdiag),
        }
    }

    /// Leading `n` x `n` block.
    pub fn truncated(&self, n: usize) -> TridiagonalRepr {
        assert!(n >= 1 && n <= self.size());
        TridiagonalRepr {
            diag: self.diag[..n].to_vec(),
            offdiag: self.offdiag[..n - 1].to_vec(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.size();
        DMatrix::from_fn(n, n, |i, j| self.get(i, j))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.offdiag)
            .fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// The M x M real symmetric coupling matrix of an M-term separable potential.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparablePotential {
    v: DMatrix<f64>,
}

impl SeparablePotential {
    /// Build from rows; the matrix must be square, finite and exactly symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::InvalidConfig("potential must have M >= 1".into()));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::InvalidConfig(format!(
                "potential row {i} has {} entries, expected {m}",
                row.len()
            )));
        }
        let v = DMatrix::from_fn(m, m, |i, j| rows[i][j]);
        Self::from_matrix(v)
    }

    pub fn from_matrix(v: DMatrix<f64>) -> Result<Self> {
        if v.nrows() == 0 || v.nrows() != v.ncols() {
            return Err(Error::InvalidConfig(format!(
                "potential must be square with M >= 1, got {}x{}",
                v.nrows(),
                v.ncols()
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidConfig(
                "potential entries must be finite".into(),
            ));
        }
        let m = v.nrows();
        let mut offending = Vec::new();
        for i in 0..m {
            for j in (i + 1)..m {
                if v[(i, j)] != v[(j, i)] {
                    offending.push(format!(
                        "V[{i}][{j}]={} vs V[{j}][{i}]={}",
                        v[(i, j)],
                        v[(j, i)]
                    ));
                }
            }
        }
        if !offending.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "potential is not symmetric: {}",
                offending.join(", ")
            )));
        }
        Ok(Self { v })
    }

    pub fn zero(m: usize) -> Self {
        assert!(m >= 1);
        Self {
            v: DMatrix::zeros(m, m),
        }
    }

    pub fn m(&self) -> usize {
        self.v.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.v[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.v
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    /// Zero-pad to a larger M.
    pub fn padded(&self, m: usize) -> Self {
        assert!(m >= self.m());
        let mut v = DMatrix::zeros(m, m);
        v.view_mut((0, 0), (self.m(), self.m())).copy_from(&self.v);
        Self { v }
    }
}

fn check_size(n_size: usize) -> Result<()> {
    if n_size == 0 {
        return Err(Error::InvalidConfig(
            "matrix size must be at least 1".into(),
        ));
    }
    if n_size > MAX_DEGREE + 1 {
        return Err(Error::CapExceeded {
            degree: n_size - 1,
            cap: MAX_DEGREE,
        });
    }
    Ok(())
}

/// Normalization a_n of the upper basis component.
pub fn normalization(n: usize, cfg: &ChannelConfig) -> Result<f64> {
    let kappa = cfg.kappa_f64();
    let nf = n as f64;
    let ln_a2 = match cfg.basis {
        Basis::Laguerre => {
            cfg.lambda.ln() + ln_gamma(nf + 1.0)? - ln_gamma(2.0 * kappa + nf + 2.0)?
        }
        Basis::Oscillator => {
            (2.0 * cfg.lambda).ln() + ln_gamma(nf + 1.0)? - ln_gamma(nf + kappa + 1.5)?
        }
    };
    Ok((0.5 * ln_a2).exp())
}

/// Upper spinor component phi_n(r) of the basis, normalization included.
pub fn phi_upper(n: usize, r: f64, cfg: &ChannelConfig) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::DomainError(format!(
            "radius must be positive, got {r}"
        )));
    }
    let kappa = cfg.kappa_f64();
    let x = cfg.lambda * r;
    let a_n = normalization(n, cfg)?;
    let (weight, poly) = match cfg.basis {
        Basis::Laguerre => (-0.5 * x, laguerre(n, 2.0 * kappa + 1.0, x)?),
        Basis::Oscillator => (-0.5 * x * x, laguerre(n, kappa + 0.5, x * x)?),
    };
    // combine power and exponential in log space so large r underflows cleanly
    let envelope = ((kappa + 1.0) * x.ln() + weight).exp();
    Ok(a_n * envelope * poly)
}

/// H0 in the basis, for a resolved C.
pub fn h0_matrix(n_size: usize, cfg: &ChannelConfig, c_value: f64) -> Result<TridiagonalRepr> {
    check_size(n_size)?;
    let kappa = cfg.kappa_f64();
    let (lambda, alpha, c) = (cfg.lambda, cfg.alpha, c_value);
    let (diag, offdiag) = match cfg.basis {
        Basis::Laguerre => {
            let q = (lambda * c / 2.0).powi(2) * (1.0 - 2.0 * alpha / c);
            let diag = (0..n_size)
                .map(|n| 2.0 * (kappa + n as f64 + 1.0) * (1.0 - q))
                .collect();
            let offdiag = (0..n_size - 1)
                .map(|n| -laguerre_coupling(n, kappa) * (1.0 + q))
                .collect();
            (diag, offdiag)
        }
        Basis::Oscillator => {
            let g = (lambda * c).powi(2) * (-1.0 + 2.0 * alpha / c);
            let diag = (0..n_size)
                .map(|n| 1.0 + g * (2.0 * n as f64 + kappa + 1.5))
                .collect();
            let offdiag = (0..n_size - 1)
                .map(|n| g * oscillator_coupling(n, kappa))
                .collect();
            (diag, offdiag)
        }
    };
    TridiagonalRepr::new(diag, offdiag)
}

/// Overlap matrix Omega in the basis, for a resolved C.
pub fn omega_matrix(n_size: usize, cfg: &ChannelConfig, c_value: f64) -> Result<TridiagonalRepr> {
    check_size(n_size)?;
    let kappa = cfg.kappa_f64();
    let (diag, offdiag) = match cfg.basis {
        Basis::Laguerre => {
            let q = (cfg.lambda * c_value / 2.0).powi(2);
            let diag = (0..n_size)
                .map(|n| 2.0 * (kappa + n as f64 + 1.0) * (1.0 + q))
                .collect();
            let offdiag = (0..n_size - 1)
                .map(|n| -laguerre_coupling(n, kappa) * (1.0 - q))
                .collect();
            (diag, offdiag)
        }
        Basis::Oscillator => {
            let h = (cfg.lambda * c_value).powi(2);
            let diag = (0..n_size)
                .map(|n| 1.0 + h * (2.0 * n as f64 + kappa + 1.5))
                .collect();
            let offdiag = (0..n_size - 1)
                .map(|n| h * oscillator_coupling(n, kappa))
                .collect();
            (diag, offdiag)
        }
    };
    TridiagonalRepr::new(diag, offdiag)
}

// sqrt((n + 1)(2 kappa + n + 2))
fn laguerre_coupling(n: usize, kappa: f64) -> f64 {
    let nf = n as f64;
    ((nf + 1.0) * (2.0 * kappa + nf + 2.0)).sqrt()
}

// sqrt((n + 1)(n + kappa + 3/2))
fn oscillator_coupling(n: usize, kappa: f64) -> f64 {
    let nf = n as f64;
    ((nf + 1.0) * (nf + kappa + 1.5)).sqrt()
}

/// Jmat(epsilon) = H0 - epsilon * Omega, with C resolved at `epsilon`.
pub fn j_matrix(epsilon: f64, n_size: usize, cfg: &ChannelConfig) -> Result<TridiagonalRepr> {
    let c_value = resolve_c(epsilon, cfg.c_rule, cfg.alpha)?;
    j_matrix_with_c(epsilon, n_size, cfg, c_value)
}

pub(crate) fn j_matrix_with_c(
    epsilon: f64,
    n_size: usize,
    cfg: &ChannelConfig,
    c_value: f64,
) -> Result<TridiagonalRepr> {
    let h0 = h0_matrix(n_size, cfg, c_value)?;
    let omega = omega_matrix(n_size, cfg, c_value)?;
    Ok(h0.add_scaled(-epsilon, &omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::CRule;
    use approx::assert_relative_eq;

    fn cfg(basis: Basis, kappa: u32, alpha: f64, rule: CRule) -> ChannelConfig {
        ChannelConfig::new(basis, kappa, 1.0, alpha, rule).unwrap()
    }

    #[test]
    fn laguerre_h0_hand_values() {
        // alpha / C = 1/2 makes the (lambda C / 2)^2 correction vanish in H0
        let c = cfg(Basis::Laguerre, 1, 0.25, CRule::Fixed(0.5));
        let h0 = h0_matrix(4, &c, 0.5).unwrap();
        assert_relative_eq!(h0.diag[0], 4.0);
        assert_relative_eq!(h0.offdiag[0], -2.0);
        assert_relative_eq!(h0.get(1, 0), h0.get(0, 1));
        assert_relative_eq!(h0.offdiag[1], -(2.0f64 * 5.0).sqrt());
    }

    #[test]
    fn oscillator_h0_diag_is_one_at_balance_point() {
        let c = cfg(Basis::Oscillator, 1, 0.25, CRule::Fixed(0.5));
        let h0 = h0_matrix(6, &c, 0.5).unwrap();
        assert!(h0.diag.iter().all(|&d| d == 1.0));
        assert!(h0.offdiag.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn omega_hand_values() {
        let lag = cfg(Basis::Laguerre, 1, 0.25, CRule::Fixed(0.5));
        assert_relative_eq!(omega_matrix(3, &lag, 0.5).unwrap().diag[0], 4.25);
        let osc = cfg(Basis::Oscillator, 1, 0.25, CRule::Fixed(0.5));
        assert_relative_eq!(omega_matrix(3, &osc, 0.5).unwrap().diag[0], 1.625);
    }

    #[test]
    fn omega_small_c_limit() {
        let lag = cfg(Basis::Laguerre, 2, 0.1, CRule::Fixed(1e-9));
        let omega = omega_matrix(5, &lag, 1e-9).unwrap();
        for n in 0..5 {
            assert_relative_eq!(
                omega.diag[n],
                2.0 * (2.0 + n as f64 + 1.0),
                max_relative = 1e-15
            );
        }
        for n in 0..4 {
            let nf = n as f64;
            assert_relative_eq!(
                omega.offdiag[n],
                -((nf + 1.0) * (4.0 + nf + 2.0)).sqrt(),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn j_matrix_values() {
        let lag = cfg(Basis::Laguerre, 1, 0.25, CRule::Fixed(0.5));
        assert_eq!(
            j_matrix(0.0, 5, &lag).unwrap(),
            h0_matrix(5, &lag, 0.5).unwrap()
        );
        assert_relative_eq!(
            j_matrix(1.2, 5, &lag).unwrap().diag[0],
            -1.1,
            epsilon = 1e-14
        );
    }

    #[test]
    fn j_matrix_is_affine_in_energy() {
        let lag = cfg(Basis::Laguerre, 2, 0.3, CRule::Fixed(0.2));
        let (e1, e2) = (1.1, 1.7);
        let a = j_matrix(e1, 6, &lag).unwrap();
        let b = j_matrix(e2, 6, &lag).unwrap();
        let mid = j_matrix(0.5 * (e1 + e2), 6, &lag).unwrap();
        let combo = a.add_scaled(1.0, &b).add_scaled(-2.0, &mid);
        assert!(combo.max_abs() < 1e-13);
    }

    #[test]
    fn balance_rebuilds_per_energy() {
        let lag = cfg(Basis::Laguerre, 1, 1.0, CRule::Balance);
        let a = j_matrix(1.2, 3, &lag).unwrap();
        let b = j_matrix(
            1.2,
            3,
            &ChannelConfig {
                c_rule: CRule::Fixed(1.0 / 2.2),
                ..lag
            },
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn omega_is_positive_definite() {
        for basis in [Basis::Laguerre, Basis::Oscillator] {
            for kappa in 1..=3 {
                for c in [0.01, 0.3, 1.0] {
                    let cfg = cfg(basis, kappa, 0.5, CRule::Fixed(c));
                    let omega = omega_matrix(20, &cfg, c).unwrap().to_dense();
                    let eig = omega.symmetric_eigenvalues();
                    assert!(
                        eig.iter().all(|&e| e > 0.0),
                        "{basis:?} kappa={kappa} C={c}"
                    );
                }
            }
        }
    }

    #[test]
    fn phi_upper_limits() {
        for basis in [Basis::Laguerre, Basis::Oscillator] {
            let cfg = cfg(basis, 2, 0.5, CRule::Balance);
            for n in [0, 3, 7] {
                assert!(phi_upper(n, 1e-8, &cfg).unwrap().abs() < 1e-20);
                assert!(phi_upper(n, 400.0, &cfg).unwrap().abs() < 1e-30);
            }
            assert!(phi_upper(0, 0.0, &cfg).is_err());
        }
    }

    #[test]
    fn potential_validation() {
        let ok = SeparablePotential::from_rows(&[vec![1.0, 2.0], vec![2.0, -1.0]]).unwrap();
        assert_eq!(ok.m(), 2);
        let err = SeparablePotential::from_rows(&[vec![1.0, 2.0], vec![2.5, -1.0]]).unwrap_err();
        assert!(err.to_string().contains("V[0][1]"));
        assert!(SeparablePotential::from_rows(&[vec![1.0, 2.0]]).is_err());
        assert!(SeparablePotential::from_rows(&[vec![f64::NAN]]).is_err());
        let padded = ok.padded(3);
        assert_eq!(padded.get(1, 1), -1.0);
        assert_eq!(padded.get(2, 2), 0.0);
    }

    #[test]
    fn size_checks() {
        let lag = cfg(Basis::Laguerre, 1, 0.5, CRule::Balance);
        assert!(h0_matrix(0, &lag, 0.3).is_err());
        assert!(matches!(
            h0_matrix(MAX_DEGREE + 2, &lag, 0.3),
            Err(Error::CapExceeded { .. })
        ));
        assert_eq!(h0_matrix(1, &lag, 0.3).unwrap().offdiag.len(), 0);
    }
}
