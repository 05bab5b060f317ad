use thiserror::Error;

/// Every failure the library can report.
///
/// Energy-dependent failures (`NotScatteringEnergy`, `KinematicPole`,
/// `SingularInnerSystem`, `NearSingularFormula`) are expected during grid
/// sweeps and map onto per-row status labels in the scan output.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial degree {degree} exceeds the cap of {cap}")]
    CapExceeded { degree: usize, cap: usize },

    #[error("degenerate hypergeometric parameters: {0}")]
    DegenerateParameters(String),

    #[error("series did not converge within {terms} terms")]
    ConvergenceFailure { terms: usize },

    #[error("argument outside the function domain: {0}")]
    DomainError(String),

    #[error("energy {epsilon} is outside the scattering continuum")]
    NotScatteringEnergy { epsilon: f64 },

    #[error("kinematic pole at energy {epsilon}")]
    KinematicPole { epsilon: f64 },

    #[error("amplitude c_n + i s_n vanishes at n = {index}")]
    ZeroAmplitude { index: usize },

    #[error("consistency failure: {0}")]
    ConsistencyFailure(String),

    #[error("closed form is near singular: |{term}| = {magnitude:.3e}")]
    NearSingularFormula { term: &'static str, magnitude: f64 },

    #[error("inner system is singular (condition estimate {condition:.3e})")]
    SingularInnerSystem { condition: f64 },

    #[error("energy grid too coarse to unwrap the phase at point {index}")]
    GridTooCoarse { index: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
