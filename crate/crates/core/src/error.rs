use thiserror::Error;

/// Errors produced by the geometric and protocol routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid point count {got}: need at least {min}")]
    InvalidCount { got: usize, min: usize },

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("points do not span 3-space")]
    DegenerateInput,

    #[error("no tabulated point set covers the sphere at infidelity radius {rf}")]
    NoCoverAvailable { rf: f64 },

    #[error("{name} = {value} is outside its domain {domain}")]
    Domain { name: &'static str, value: f64, domain: &'static str },

    #[error("site index {index} out of range for {len} sites")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("vector ({0}, {1}, {2}) cannot be normalized")]
    ZeroVector(f64, f64, f64),
}

pub type Result<T> = std::result::Result<T, Error>;
