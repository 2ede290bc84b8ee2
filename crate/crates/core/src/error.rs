use thiserror::Error;

/// Domain errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("not finite within cap ({0} elements)")]
    NotFinite(usize),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("unrecognized group: {0}")]
    UnrecognizedGroup(String),
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("non-reduced fraction: numerator and denominator share a root near {0}")]
    NonReduced(String),
    #[error("non-simple root near {0}")]
    NonSimpleRoot(String),
    #[error("point is a pole")]
    AtPole,
    #[error("illegal table cell: {0}")]
    IllegalCell(String),
    #[error("invalid interior point: {0}")]
    InvalidInterior(String),
    #[error("accidental extra symmetry: isotropy is {0}")]
    AccidentalSymmetry(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("sampling gave up after {0} rejections")]
    SamplingExhausted(usize),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
