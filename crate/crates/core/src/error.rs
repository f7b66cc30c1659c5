use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-hyperbolic element (|trace| = {0} <= 2)")]
    NonHyperbolic(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("floating-point overflow: {0}")]
    Overflow(String),
    #[error("degenerate structure: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown spiral law '{0}'")]
    UnknownLaw(String),
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("polytope exceeds supported size: {0}")]
    TooLarge(String),
    #[error("origin is not strictly interior")]
    OriginNotInterior,
    #[error("point lies in the interior of the body")]
    PointInterior,
    #[error("point lies outside the body")]
    PointOutside,
    #[error("face is not adherence-closed")]
    NotClosed,
    #[error("unknown face '{0}'")]
    UnknownFace(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
}

impl Error {
    /// Stable machine-readable kind, used in CLI error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonHyperbolic(_) => "non_hyperbolic",
            Error::Domain(_) => "domain",
            Error::InvalidStructure(_) => "invalid_structure",
            Error::Overflow(_) => "overflow",
            Error::Degenerate(_) => "degenerate",
            Error::Precondition(_) => "precondition",
            Error::UnknownLaw(_) => "unknown_law",
            Error::NotFullDimensional => "not_full_dimensional",
            Error::TooLarge(_) => "too_large",
            Error::OriginNotInterior => "origin_not_interior",
            Error::PointInterior => "point_interior",
            Error::PointOutside => "point_outside",
            Error::NotClosed => "not_closed",
            Error::UnknownFace(_) => "unknown_face",
            Error::InvalidPoset(_) => "invalid_poset",
        }
    }
}
