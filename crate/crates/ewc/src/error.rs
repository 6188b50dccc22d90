use thiserror::Error;

#[derive(Debug, Error)]
pub enum EwcError {
    #[error("concentration must lie in [0, 1): got {0}")]
    RhoOutOfRange(f64),
    #[error("point must lie strictly inside the unit disc: |z| = {0}")]
    NotInDisc(f64),
    #[error("point must lie on the unit circle: |z| = {0}")]
    NotOnCircle(f64),
    #[error("interval endpoints must satisfy a < b: a = {a}, b = {b}")]
    EmptyInterval { a: f64, b: f64 },
    #[error("mean direction is undefined: mean resultant length is zero")]
    UndefinedMeanDirection,
    #[error("uniform parameters have no modes")]
    UniformNoModes,
    #[error("mixture representation requires rho1 < 0: got {0}")]
    MixtureRhoNonNegative(f64),
    #[error("unit vector has norm {0}, expected 1")]
    NotUnitVector(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension must be at least 2: got {0}")]
    BadDimension(usize),
    #[error("quantile search did not converge after {0} iterations")]
    QuantileNoConvergence(usize),
    #[error("walker exceeded max_steps = {0} without crossing the boundary")]
    MaxStepsExceeded(usize),
    #[error("acceptance rate {rate:.2e} below {floor:.1e}; widen epsilon or raise the budget")]
    AcceptanceTooLow { rate: f64, floor: f64 },
    #[error("walk must start inside the target circle: ||start|| = {0}")]
    StartOutsideCircle(f64),
    #[error("need at least {need} observations, got {got}")]
    TooFewObservations { need: usize, got: usize },
    #[error("degenerate sample: all angles equal")]
    DegenerateSample,
    #[error("invalid Mobius map: |alpha| = {0}, expected 1")]
    BadMobiusAlpha(f64),
    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, EwcError>;
