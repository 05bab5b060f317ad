//! Exact J-matrix solution for an M-term separable potential with any
//! truncation N >= M.
//!
//! The potential lives entirely in the leading M x M block, so rows n >= M
//! of the wave equation are free. Beyond the inner block the solution is
//! h_n = s_n + tan(tau) c_n, and the inner block couples to it through the
//! single element Jmat_{N-1,N}. With G = (A^{-1})_{N-1,N-1} for the inner
//! matrix A = Jmat + alpha² V,
//!
//! tan(tau) = -(s_{N-1} + G J_{N-1,N} s_N) / (c_{N-1} + G J_{N-1,N} c_N).

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::SeparablePotential;
use crate::coefficients::ReferenceSolution;
use crate::error::{Error, Result};
use crate::kinematics::ChannelConfig;
use crate::phase_analytic::{Method, SMatrixPoint};

/// Condition estimate above which the inner system is reported singular.
pub const SINGULAR_CONDITION: f64 = 1e14;

/// The truncated N x N problem: Jmat block plus alpha² V in the leading corner.
#[derive(Debug, Clone)]
pub struct InnerSystem {
    pub n_size: usize,
    pub a_matrix: DMatrix<f64>,
    /// Jmat_{N-1,N}, the only link to the free exterior.
    pub boundary_coupling: f64,
}

impl InnerSystem {
    pub fn assemble(
        reference: &ReferenceSolution,
        v: &SeparablePotential,
        n_size: usize,
        alpha: f64,
    ) -> Result<Self> {
        let m = v.m();
        if n_size < m {
            return Err(Error::InvalidConfig(format!(
                "truncation N = {n_size} is smaller than M = {m}"
            )));
        }
        if reference.jmat.size() < n_size + 1 {
            return Err(Error::InvalidConfig(format!(
                "reference Jmat has {} rows, need {}",
                reference.jmat.size(),
                n_size + 1
            )));
        }
        let mut a_matrix = reference.jmat.truncated(n_size).to_dense();
        let coupling = alpha * alpha;
        for i in 0..m {
            for j in 0..m {
                a_matrix[(i, j)] += coupling * v.get(i, j);
            }
        }
        Ok(Self {
            n_size,
            a_matrix,
            boundary_coupling: reference.jmat.offdiag[n_size - 1],
        })
    }

    /// Solve A x = e_{N-1}; returns x and the 2-norm condition estimate of A.
    pub fn solve_boundary(&self) -> Result<(DVector<f64>, f64)> {
        let n = self.n_size;
        let singular = self.a_matrix.singular_values();
        let largest = singular.max();
        let smallest = singular.min();
        let condition = if smallest > 0.0 {
            largest / smallest
        } else {
            f64::INFINITY
        };
        if !(condition <= SINGULAR_CONDITION) {
            return Err(Error::SingularInnerSystem { condition });
        }
        let mut rhs = DVector::zeros(n);
        rhs[n - 1] = 1.0;
        let x = self
            .a_matrix
            .clone()
            .lu()
            .solve(&rhs)
            .ok_or(Error::SingularInnerSystem { condition })?;
        Ok((x, condition))
    }
}

struct Matching {
    /// s_{N-1} + G b s_N
    numerator: f64,
    /// c_{N-1} + G b c_N
    denominator: f64,
    green: f64,
    condition: f64,
    boundary: DVector<f64>,
}

fn match_exterior(reference: &ReferenceSolution, inner: &InnerSystem) -> Result<Matching> {
    let n = inner.n_size;
    let (boundary, condition) = inner.solve_boundary()?;
    let green = boundary[n - 1];
    let gb = green * inner.boundary_coupling;
    let pair = &reference.pair;
    Ok(Matching {
        numerator: pair.s[n - 1] + gb * pair.s[n],
        denominator: pair.c[n - 1] + gb * pair.c[n],
        green,
        condition,
        boundary,
    })
}

fn check_inputs(v: &SeparablePotential, n_size: usize) -> Result<()> {
    if n_size < v.m() {
        return Err(Error::InvalidConfig(format!(
            "numeric solution needs N >= M, got N = {n_size}, M = {}",
            v.m()
        )));
    }
    Ok(())
}

/// S-matrix e^{2i tau} from the exact truncated J-matrix problem.
pub fn s_matrix_numeric(
    epsilon: f64,
    v: &SeparablePotential,
    n_size: usize,
    cfg: &ChannelConfig,
) -> Result<SMatrixPoint> {
    check_inputs(v, n_size)?;
    let reference = ReferenceSolution::compute(epsilon, cfg, n_size)?;
    s_matrix_numeric_with(&reference, v, n_size, cfg)
}

/// Same as `s_matrix_numeric` but reuses a precomputed reference solution
/// (which must cover rows 0..=n_size).
pub fn s_matrix_numeric_with(
    reference: &ReferenceSolution,
    v: &SeparablePotential,
    n_size: usize,
    cfg: &ChannelConfig,
) -> Result<SMatrixPoint> {
    check_inputs(v, n_size)?;
    let inner = InnerSystem::assemble(reference, v, n_size, cfg.alpha)?;
    let matching = match_exterior(reference, &inner)?;
    // tan(tau) = -numerator / denominator, S = (1 + i tan) / (1 - i tan)
    let s_value = Complex64::new(matching.denominator, -matching.numerator)
        / Complex64::new(matching.denominator, matching.numerator);
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("condition".to_string(), matching.condition);
    diagnostics.insert("green_boundary".to_string(), matching.green);
    diagnostics.insert("match_numerator".to_string(), matching.numerator);
    diagnostics.insert("match_denominator".to_string(), matching.denominator);
    Ok(SMatrixPoint::new(
        reference.state.epsilon,
        s_value,
        Method::Numeric(n_size),
        diagnostics,
    ))
}

/// Expansion coefficients of the full solution.
#[derive(Debug, Clone)]
pub struct SolutionCoefficients {
    /// h_0..h_{N-1}, normalized so that h_n = s_n + tan(tau) c_n for n >= N.
    pub h: Vec<f64>,
    /// h_N and h_{N+1} from the exterior form.
    pub exterior: [f64; 2],
    pub tan_tau: f64,
    /// Largest relative residual of the wave equation over rows 0..=N.
    pub residual: f64,
}

pub fn solve_coefficients(
    epsilon: f64,
    v: &SeparablePotential,
    n_size: usize,
    cfg: &ChannelConfig,
) -> Result<SolutionCoefficients> {
    check_inputs(v, n_size)?;
    let reference = ReferenceSolution::compute(epsilon, cfg, n_size)?;
    let inner = InnerSystem::assemble(&reference, v, n_size, cfg.alpha)?;
    let matching = match_exterior(&reference, &inner)?;
    if matching.denominator == 0.0 {
        return Err(Error::DomainError(
            "phase shift is exactly ±pi/2; the s_n + tan(tau) c_n normalization is undefined"
                .into(),
        ));
    }
    let tan_tau = -matching.numerator / matching.denominator;
    let pair = &reference.pair;
    let exterior = [
        pair.s[n_size] + tan_tau * pair.c[n_size],
        pair.s[n_size + 1] + tan_tau * pair.c[n_size + 1],
    ];
    let scale = -inner.boundary_coupling * exterior[0];
    let h: Vec<f64> = matching.boundary.iter().map(|x| scale * x).collect();

    let mut full = h.clone();
    full.extend_from_slice(&exterior);
    let jmat = &reference.jmat;
    let coupling = cfg.alpha * cfg.alpha;
    let mut residual = 0.0f64;
    for row in 0..=n_size {
        let mut terms = Vec::with_capacity(v.m() + 3);
        terms.extend((row.saturating_sub(1)..=row + 1).map(|col| jmat.get(row, col) * full[col]));
        if row < v.m() {
            terms.extend((0..v.m()).map(|col| coupling * v.get(row, col) * full[col]));
        }
        let row_scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        if row_scale > 0.0 {
            residual = residual.max(terms.iter().sum::<f64>().abs() / row_scale);
        }
    }
    Ok(SolutionCoefficients {
        h,
        exterior,
        tan_tau,
        residual,
    })
}
