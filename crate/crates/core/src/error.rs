use thiserror::Error;

use crate::pattern::ValidationReport;

/// Every failure the library reports. Validation problems are data (see
/// [`ValidationReport`]); they only become an `Error` when an operation needs
/// a valid pattern and does not get one.
#[derive(Debug, Error)]
pub enum Error {
    #[error("pattern is invalid: {0}")]
    Invalid(ValidationReport),
    #[error("unknown leaf `{0}`")]
    UnknownLeaf(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("leaves `{0}` and `{1}` have different signs")]
    MixedSigns(String, String),
    #[error("leaves `{0}` and `{1}` intersect")]
    Intersecting(String, String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("separators between `{0}` and `{1}` are not linearly ordered; the pattern is not planar data")]
    NonPlanar(String, String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("distinct points `{0}` and `{1}` are separated by no leaf")]
    DegeneratePoints(String, String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("window [{lo}, {hi}] is smaller than one period ({period})")]
    WindowTooSmall { lo: i64, hi: i64, period: usize },
    #[error("automorphism does not preserve the pattern: {0}")]
    NotPreserved(String),
    #[error("offsets do not induce a permutation of residues")]
    NotBijective,
    #[error("pattern carries no scalloped marker")]
    NoMarker,
    #[error("{0}")]
    Undefined(String),
    #[error("budget exceeded: projected {projected_ms} ms > {budget_ms} ms")]
    Budget { projected_ms: u128, budget_ms: u128 },
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
