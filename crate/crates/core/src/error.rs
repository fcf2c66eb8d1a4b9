use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),
    #[error("invalid piecewise-linear data: {0}")]
    InvalidFunction(String),
    #[error("product integral diverges: neither factor is compactly supported")]
    BothTailsNonzero,
    #[error("unsupported map: {0}")]
    UnsupportedMap(String),
    #[error("invalid window or step: {0}")]
    InvalidWindow(String),
    #[error("enumeration produced {count} elements, over the cap of {max}")]
    TooManyElements { count: usize, max: usize },
    #[error("element {0} is not in the poset")]
    ElementNotInPoset(String),
    #[error("window [{0}, {1}] is not symmetric about 0")]
    WindowNotSymmetric(String, String),
    #[error("no poset element contains both {0} and {1}")]
    NoCommonSupport(String, String),
    #[error("paths are not composable: end of the first differs from start of the second")]
    NonComposable,
    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,
    #[error("interval {0} is too small")]
    IntervalTooSmall(String),
    #[error("grading representations are on different sides")]
    SideMismatch,
    #[error("point {0} is the pole of the Möbius map")]
    PoleHit(String),
    #[error("charge representative does not fit in {0}")]
    RepresentativeDoesNotFit(String),
    #[error("consecutive chain elements {0} and {1} do not overlap")]
    NoOverlap(String, String),
    #[error("support component {0} is not inside any chain element")]
    SupportNotCovered(String),
    #[error("localizations are not ordered left to right")]
    NotOrdered,
    #[error("test pair is not representable in the ambient space: {0}")]
    NotInAmbient(String),
    #[error("unsupported index element for this operation: {0}")]
    UnsupportedElement(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
