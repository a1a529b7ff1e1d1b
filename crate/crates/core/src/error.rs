use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quaternion {0} is too close to zero to invert")]
    ZeroDivisor(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("point {0:?} has vanishing vector part")]
    SingularVectorPart([f64; 4]),
    #[error("finite-difference stencil around {0:?} leaves the domain")]
    StencilOutOfDomain([f64; 4]),
    #[error("segment from {a:?} to {b:?} leaves the domain")]
    SegmentLeavesDomain { a: [f64; 4], b: [f64; 4] },
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("multi-index has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("bad domain bounds: {0}")]
    BadBounds(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular to working precision")]
    SingularMatrix,
    #[error("constant term of the series is not invertible")]
    SingularConstantTerm,
    #[error("I - sum x_u A_u is singular at the requested point")]
    SingularPencil,
    #[error("point {0:?} lies outside Omega_1")]
    OutsideOmega1([f64; 4]),
    #[error("point {0:?} lies outside Omega_A")]
    PointOutsideOmegaA([f64; 4]),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
