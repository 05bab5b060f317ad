//! Relativistic J-matrix scattering for M-term separable potentials with
//! Laguerre-type form factors.
//!
//! The reference Hamiltonian is the free Dirac operator, represented as a
//! tridiagonal matrix in either a Laguerre or an oscillator spinor basis.
//! Phase shifts come either from closed-form S-matrix expressions (M = 1, 2,
//! 3) or from the exact truncated J-matrix solution (any M, N >= M).
//!
//! ```
//! use relsep::{s_matrix_m1, s_matrix_numeric, Basis, ChannelConfig, CRule, SeparablePotential};
//!
//! let cfg = ChannelConfig::new(Basis::Laguerre, 1, 1.0, 1.0, CRule::Balance).unwrap();
//! let analytic = s_matrix_m1(1.3, 2.0, &cfg).unwrap();
//! let v = SeparablePotential::from_rows(&[vec![2.0]]).unwrap();
//! let numeric = s_matrix_numeric(1.3, &v, 6, &cfg).unwrap();
//! assert!((analytic.s_value - numeric.s_value).norm() < 1e-8);
//! ```

// NaN must fail the `!(x > 0.0)` style domain checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// tabulated nodes and reference values keep their published digits
#![allow(clippy::excessive_precision)]

pub mod basis;
pub mod coefficients;
pub mod error;
pub mod interface;
pub mod kinematics;
pub mod phase_analytic;
pub mod phase_numeric;
pub mod quadrature;
pub mod specfun;

pub use basis::{
    h0_matrix, j_matrix, omega_matrix, phi_upper, SeparablePotential, TridiagonalRepr,
};
pub use coefficients::{
    coefficient_pair, cosine_like, kinematical, sine_like, CoefficientPair, Kinematical,
    ReferenceSolution,
};
pub use error::{Error, Result};
pub use kinematics::{
    energy_for_wavenumber, kinematic_state, omega_angle, resolve_c, wavenumber, Basis, CRule,
    ChannelConfig, KinematicState,
};
pub use phase_analytic::{
    s_matrix_analytic, s_matrix_m1, s_matrix_m2, s_matrix_m3, unwrap_phase, Method, SMatrixPoint,
};
pub use phase_numeric::{s_matrix_numeric, solve_coefficients, InnerSystem, SolutionCoefficients};
