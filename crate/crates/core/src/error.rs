//! Error taxonomy shared by every module.
//!
//! Variants carry the data a caller can act on (byte offsets, witnesses,
//! truncation degrees); everything else goes in the message.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Zero polynomial, empty component list, all-zero coordinates.
    DegenerateInput(String),
    /// Degree bound violated (homogenization target, eliminated-variable degree).
    InvalidDegree(String),
    /// Top forms share a nonzero common zero; witness coordinates when one was found.
    NotRegular { witness: Option<Vec<String>> },
    /// Term-count or size cap exceeded during an exact computation.
    ResourceLimit(String),
    /// Linear change of coordinates with a singular matrix.
    SingularMatrix,
    /// Local dimension failed to stabilize by the truncation cap: the fiber is
    /// not isolated at the point (infinite length).
    NotIsolated { cap: u32 },
    /// Operation requires a different coefficient field than the input carries.
    UnsupportedField(String),
    NotOnCurve,
    /// Survey could not find enough regular draws.
    SamplingExhausted,
    /// Central projection at the origin.
    ProjectionUndefined,
    UnknownVariable { name: String },
    /// Parse failure; `offset` is a byte offset into the source text.
    SyntaxError { offset: usize, message: String },
    /// Malformed rational literal (zero denominator).
    InvalidCoefficient(String),
    /// JSON job document violates the schema; `path` locates the field.
    SchemaError { path: String, message: String },
    DimensionError(String),
    /// Weil-function chart index with a zero coordinate.
    InvalidChart,
    /// Explicit S-constant needs a Nullstellensatz certificate we do not construct.
    CertificateUnavailable(String),
    /// Inequality-statement instance data malformed or mismatched.
    InstanceError(String),
    InvalidInput(String),
    /// Claimed period does not hold.
    NotPeriodic,
    UnsupportedDegree(String),
    /// Identically zero fixed-point form (degree-1 pathologies).
    Degenerate(String),
    UnsupportedDimension(String),
}

impl Error {
    /// Stable machine-readable code, used in CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::InvalidDegree(_) => "InvalidDegree",
            Error::NotRegular { .. } => "NotRegular",
            Error::ResourceLimit(_) => "ResourceLimit",
            Error::SingularMatrix => "SingularMatrix",
            Error::NotIsolated { .. } => "NotIsolated",
            Error::UnsupportedField(_) => "UnsupportedField",
            Error::NotOnCurve => "NotOnCurve",
            Error::SamplingExhausted => "SamplingExhausted",
            Error::ProjectionUndefined => "ProjectionUndefined",
            Error::UnknownVariable { .. } => "UnknownVariable",
            Error::SyntaxError { .. } => "SyntaxError",
            Error::InvalidCoefficient(_) => "InvalidCoefficient",
            Error::SchemaError { .. } => "SchemaError",
            Error::DimensionError(_) => "DimensionError",
            Error::InvalidChart => "InvalidChart",
            Error::CertificateUnavailable(_) => "CertificateUnavailable",
            Error::InstanceError(_) => "InstanceError",
            Error::InvalidInput(_) => "InvalidInput",
            Error::NotPeriodic => "NotPeriodic",
            Error::UnsupportedDegree(_) => "UnsupportedDegree",
            Error::Degenerate(_) => "Degenerate",
            Error::UnsupportedDimension(_) => "UnsupportedDimension",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateInput(m) => write!(f, "degenerate input: {m}"),
            Error::InvalidDegree(m) => write!(f, "invalid degree: {m}"),
            Error::NotRegular { witness: Some(w) } => {
                write!(f, "not a regular endomorphism: top forms vanish at ({})", w.join(", "))
            }
            Error::NotRegular { witness: None } => {
                write!(f, "not a regular endomorphism: top forms have a common nonzero zero")
            }
            Error::ResourceLimit(m) => write!(f, "resource limit exceeded: {m}"),
            Error::SingularMatrix => write!(f, "matrix is singular"),
            Error::NotIsolated { cap } => write!(
                f,
                "local dimension did not stabilize by truncation degree {cap}: point not isolated in its fiber"
            ),
            Error::UnsupportedField(m) => write!(f, "unsupported coefficient field: {m}"),
            Error::NotOnCurve => write!(f, "point does not lie on the curve"),
            Error::SamplingExhausted => write!(f, "sampling exhausted without enough regular draws"),
            Error::ProjectionUndefined => write!(f, "central projection undefined at the origin"),
            Error::UnknownVariable { name } => write!(f, "unknown variable '{name}'"),
            Error::SyntaxError { offset, message } => {
                write!(f, "syntax error at byte {offset}: {message}")
            }
            Error::InvalidCoefficient(m) => write!(f, "invalid coefficient: {m}"),
            Error::SchemaError { path, message } => write!(f, "schema error at {path}: {message}"),
            Error::DimensionError(m) => write!(f, "dimension mismatch: {m}"),
            Error::InvalidChart => write!(f, "chart coordinate is zero"),
            Error::CertificateUnavailable(m) => {
                write!(f, "explicit constant unavailable: {m} (use empirical mode)")
            }
            Error::InstanceError(m) => write!(f, "malformed statement instance: {m}"),
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::NotPeriodic => write!(f, "point is not periodic with the claimed period"),
            Error::UnsupportedDegree(m) => write!(f, "unsupported degree: {m}"),
            Error::Degenerate(m) => write!(f, "degenerate: {m}"),
            Error::UnsupportedDimension(m) => write!(f, "unsupported dimension: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
