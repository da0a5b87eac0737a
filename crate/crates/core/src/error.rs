use thiserror::Error;

/// Errors raised by walk construction, coin/schedule validation and the
/// density and spectral evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("initial spinor is not normalized: |alpha|^2 + |beta|^2 = {norm}")]
    Normalization { norm: f64 },
    #[error("coin is not unitary: max |U U* - I| = {defect:e}")]
    Unitarity { defect: f64 },
    #[error("degenerate coin angle {theta}: theta must not be a multiple of pi/2")]
    DegenerateCoin { theta: f64 },
    #[error("coin entry {entry} is zero; all of a, b, c, d must be nonzero")]
    ZeroEntry { entry: &'static str },
    #[error("the two coins of a two-period walk must differ")]
    EqualAngle,
    #[error("{0}")]
    Domain(String),
    #[error("operation requires a {expected} schedule")]
    Kind { expected: &'static str },
    #[error("symbol eigenvalues coincide at k = {k} (|lambda0 - lambda1| = {gap:e})")]
    DegenerateSymbol { k: f64, gap: f64 },
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
