use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("evaluation at pole h = {pole} (λ = {lambda})")]
    PoleEvaluation { lambda: f64, pole: f64 },
    #[error("cannot evaluate the boundary function ∞")]
    InfinityEvaluation,
    #[error("invalid coefficient vector: {0}")]
    InvalidCoefficients(String),
    #[error("malformed rational function: {0}")]
    Malformed(String),
    #[error("division by (λ - {mu}) leaves remainder {remainder:e}")]
    DivisionRemainder { mu: f64, remainder: f64 },
    #[error("transformed function is not Herglotz-Nevanlinna: {0}")]
    NotHerglotz(String),
    #[error("{count} sine coefficients alias on a grid of {grid} cells")]
    AliasRisk { count: usize, grid: usize },
    #[error("grid mismatch: {0} vs {1} cells")]
    GridMismatch(usize, usize),
    #[error("non-finite solution state at λ = {lambda}")]
    NonFiniteState { lambda: f64 },
    #[error("eigenvalue count mismatch: found {found}, expected {expected}")]
    MissedEigenvalue { found: usize, expected: usize },
    #[error("λ = {lambda} is not an eigenvalue (|χ| = {residual:e})")]
    NotAnEigenvalue { lambda: f64, residual: f64 },
    #[error("norming constant {0} is not positive")]
    NonPositive(f64),
    #[error("transform solution vanishes on [0, π] (min |v| = {min:e}, max |v| = {max:e})")]
    VanishingEigenfunction { min: f64, max: f64 },
    #[error("v(π)/v(0) = {0} is not positive")]
    SignInconsistency(f64),
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("zero denominator in ρ (μ = {mu}, ν = {nu})")]
    ZeroDenominator { mu: f64, nu: f64 },
    #[error("M + N = {0} is odd; inversion is only available for even parity")]
    OddParity(i32),
    #[error("spectral data violate the characterization: {0}")]
    CharacterizationViolation(String),
    #[error("base case did not converge after {iterations} iterations (residual {residual:e})")]
    BaseCaseNoConvergence { iterations: usize, residual: f64 },
    #[error("ill-posed base case: {0}")]
    IllPosed(String),
    #[error("index mismatch: ({0}, {1}) vs ({2}, {3})")]
    IndexMismatch(i32, i32, i32, i32),
    #[error("degenerate pair: d = {0:e}")]
    DegeneratePair(f64),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Whether the error is a convergence failure rather than a domain/input problem.
    pub fn is_convergence(&self) -> bool {
        matches!(
            self,
            Error::BaseCaseNoConvergence { .. } | Error::MissedEigenvalue { .. } | Error::NonFiniteState { .. }
        )
    }
}
