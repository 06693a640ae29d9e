use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("{0} applied at a zero of its argument")]
    SingularPoint(&'static str),
    #[error("point lies on or outside the chart boundary")]
    DomainBoundary,
    #[error("point is a pole of the rational map")]
    PoleAtPoint,
    #[error("rational map is degenerate (constant)")]
    DegenerateMap,
    #[error("numerator and denominator share a root near {0}")]
    NotCoprime(String),
    #[error("root finder did not converge within {0} iterations")]
    NonConvergence(usize),
    #[error("point lies inside an exclusion disc")]
    ExcludedRegion,
    #[error("adaptive quadrature did not reach tolerance: {0}")]
    QuadratureNonConvergence(String),
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),
    #[error("bracket of elements from different algebras (C={0} vs C={1})")]
    MixedAlgebra(i8, i8),
    #[error("point lies on the removed fibre z1 = 0")]
    OnRemovedFibre,
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("bundle map domain inequality violated")]
    DomainViolation,
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("point lies outside the region C0 r^2 > -1")]
    OutsideRegion,
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
