use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("polynomial has degree zero")]
    DegreeZero,

    #[error(
        "root finding did not converge after {iterations} iterations (worst residual {residual:e})"
    )]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("scale factor must be positive, got {0}")]
    NonPositiveLambda(f64),

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("cannot invert a root at the origin")]
    ZeroRoot,

    #[error("root of modulus {modulus} is not strictly inside radius {radius}")]
    RootOnOrOutsideBoundary { modulus: f64, radius: f64 },

    #[error("root of modulus {modulus} lies on the circle of radius {radius}")]
    RootOnBoundary { modulus: f64, radius: f64 },

    #[error("evaluation at a pole of the Blaschke product")]
    PoleEvaluation,

    #[error("root of modulus {modulus} is outside the disk of radius {radius}")]
    RootOutsideDisk { modulus: f64, radius: f64 },

    #[error("root finding failed at unwinding step {step}: {reason}")]
    RootFindingFailed { step: usize, reason: String },

    #[error("no valid radius: {0}")]
    RadiusSelectionFailed(String),

    #[error("quadrature did not converge with {points} points")]
    QuadratureNonConvergence { points: usize },

    #[error("lambda {lambda} does not capture a root of modulus {modulus}")]
    LambdaTooSmall { lambda: f64, modulus: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("root of modulus {0} is not captured by the unit disk")]
    RootNotCaptured(f64),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("no sign change of the contraction gap on the bracket for n = {0}")]
    BracketInvalid(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{failed} of {total} samples failed")]
    TooManyFailures { failed: usize, total: usize },
}
