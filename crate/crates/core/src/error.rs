use thiserror::Error;

/// Errors raised by the kernel. Every variant maps to a stable
/// machine-readable code and a CLI exit status.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("group tag mismatch: {0}")]
    TagMismatch(String),
    #[error("invalid group element: {0}")]
    InvalidGroupElement(String),
    #[error("invalid algebra element: {0}")]
    InvalidAlgebraElement(String),
    #[error("division by the zero function")]
    DivisionByZero,
    #[error("pole at t = {0}")]
    Pole(String),
    #[error("parameter {0} outside the motion domain")]
    OutOfDomain(String),
    #[error("invalid motion: {0}")]
    InvalidMotion(String),
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error("stationary instant at t = {0}: derivative surface vanishes")]
    StationaryInstant(String),
    #[error("characteristic degenerates into cone rulings")]
    RulingDegenerate,
    #[error("derivative surface is a plane through the apex")]
    PlaneDegenerate,
    #[error("derivative surface is not in the cone image span: {0}")]
    NotInImageSpan(String),
    #[error("denominator vanishes in the requested interval")]
    PoleInInterval,
    #[error("no intersection found by the seed sweep")]
    NoIntersectionFound,
    #[error("empty trimming region")]
    EmptyRegion,
    #[error("knots must be strictly increasing")]
    NonIncreasingKnots,
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::TagMismatch(_) => "E_TAG_MISMATCH",
            Error::InvalidGroupElement(_) => "E_INVALID_GROUP_ELEMENT",
            Error::InvalidAlgebraElement(_) => "E_INVALID_ALGEBRA_ELEMENT",
            Error::DivisionByZero => "E_DIVISION_BY_ZERO",
            Error::Pole(_) => "E_POLE",
            Error::OutOfDomain(_) => "E_OUT_OF_DOMAIN",
            Error::InvalidMotion(_) => "E_INVALID_MOTION",
            Error::InvalidParameter(_) => "E_INVALID_PARAMETER",
            Error::StationaryInstant(_) => "E_STATIONARY_INSTANT",
            Error::RulingDegenerate => "E_RULING_DEGENERATE",
            Error::PlaneDegenerate => "E_PLANE_DEGENERATE",
            Error::NotInImageSpan(_) => "E_NOT_IN_IMAGE_SPAN",
            Error::PoleInInterval => "E_POLE_IN_INTERVAL",
            Error::NoIntersectionFound => "E_NO_INTERSECTION",
            Error::EmptyRegion => "E_EMPTY_REGION",
            Error::NonIncreasingKnots => "E_NON_INCREASING_KNOTS",
            Error::Parse { .. } => "E_PARSE",
            Error::Io(_) => "E_IO",
        }
    }

    /// Exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::StationaryInstant(_)
            | Error::RulingDegenerate
            | Error::PlaneDegenerate
            | Error::NotInImageSpan(_)
            | Error::PoleInInterval
            | Error::NoIntersectionFound
            | Error::EmptyRegion => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
