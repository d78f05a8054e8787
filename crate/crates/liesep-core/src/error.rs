use thiserror::Error;

use crate::symcore::SymError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("metric is identically degenerate")]
    DegenerateMetric,
    #[error("operator symbol does not match the metric: {0}")]
    SymbolMismatch(String),
    #[error("not a degenerate point: det g = {0} at the basepoint")]
    NotDegenerate(String),
    #[error("unreachable degenerate point has no fold map")]
    Unreachable,
    #[error("entry {entry} is outside the supported class: {reason}")]
    UnsupportedEntry { entry: usize, reason: String },
    #[error("not expressible in target coordinates: {0}")]
    NotExpressible(String),
    #[error("potential does not separate in {0} coordinates")]
    NotSeparable(String),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
