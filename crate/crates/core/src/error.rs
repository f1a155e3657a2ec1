//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value list has length {got}, expected 2^{n} = {expected}")]
    LengthMismatch { n: usize, got: usize, expected: usize },
    #[error("non-finite value at index {index}")]
    NonFiniteValue { index: usize },
    #[error("dimension {n} exceeds the cube cap {cap} (set CUBE_MAX_N to raise)")]
    DimensionTooLarge { n: usize, cap: usize },
    #[error("functions live on cubes of different dimension ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("radius {r} out of range for dimension {n}")]
    RadiusOutOfRange { n: usize, r: usize },
    #[error("sphere mass {mass} exceeds total mass 2^n = {total}")]
    MassOverflow { mass: f64, total: f64 },
    #[error("norm order q = {0} must be >= 1")]
    InvalidOrder(f64),
    #[error("negative value at index {index}: {value}")]
    NegativeValue { index: usize, value: f64 },
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("function is constant")]
    ConstantFunction,
    #[error("{what} = {value} outside [{lo}, {hi}]")]
    DomainError { what: &'static str, value: f64, lo: f64, hi: f64 },
    #[error("slope {0} outside the attainable range [{1}, {2}]")]
    SlopeOutOfRange(f64, f64, f64),
    #[error("target {0} outside the attainable range [{1}, {2}]")]
    TargetOutOfRange(f64, f64, f64),
    #[error("point ({0}, {1}) lies outside the feasible region")]
    PointOutsideOmega(f64, f64),
    #[error("anchor ({0}, {1}) violates the norm constraint")]
    AnchorConstraintViolated(f64, f64),
    #[error("parameters select a different case of the maximization: {0}")]
    CaseMismatch(&'static str),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(&'static str),
    #[error("vertex set is empty")]
    EmptySet,
    #[error("vertex set is the full cube; the bound degenerates")]
    FullCube,
    #[error("vertex mask {mask:#x} does not fit in dimension {n}")]
    VertexOutOfRange { mask: u64, n: usize },
    #[error("unknown function model `{0}`")]
    UnknownModel(String),
    #[error("bad suite configuration: {0}")]
    BadConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_domain(what: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(value)
    } else {
        Err(Error::DomainError { what, value, lo, hi })
    }
}
