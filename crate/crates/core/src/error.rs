use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the window an operation is defined on.
    #[error("parameter out of range: {0}")]
    Parameter(String),

    /// Argument outside a special function's supported domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A point that must lie inside the domain does not.
    #[error("point {point:?} is not inside the domain")]
    OutsideDomain { point: Vec<f64> },

    /// Operation requires a convex domain.
    #[error("operation requires a convex domain, got {0}")]
    NotConvex(&'static str),

    /// Invalid geometry description.
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("unsupported dimension {0}; supported dimensions are 1, 2 and 3")]
    UnsupportedDimension(usize),

    /// Adaptive quadrature or refinement failed to reach its tolerance.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// Sphere quadrature fails its structural checks.
    #[error("sphere quadrature rejected: {0}")]
    QuadratureResolution(String),

    /// Trial function support leaks outside the domain or touches a forbidden point.
    #[error("support violation: {0}")]
    SupportViolation(String),

    /// Requested discretization exceeds the configured size cap.
    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("trial function vanishes identically")]
    ZeroFunction,

    /// Weight kind cannot be used with the given domain or parameters.
    #[error("weight kind {kind} invalid here: {reason}")]
    KindMismatch { kind: String, reason: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn outside<T: crate::Real>(x: &[T]) -> Self {
        Error::OutsideDomain {
            point: x.iter().map(|v| v.to_f64_lossy()).collect(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
