use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed element: {0}")]
    MalformedElement(String),
    #[error("cosets belong to different subgroups")]
    MismatchedSubgroup,
    #[error("subgroup is not flagged normal")]
    NotNormal,
    #[error("no canonical coset representative: {0}")]
    NoCanonicalRep(String),
    #[error("index {0} is outside the axis")]
    IndexOutsideAxis(i64),
    #[error("sequences live on different axes")]
    MixedAxis,
    #[error("alphabets differ: {0}")]
    MixedAlphabet(String),
    #[error("malformed sequence: {0}")]
    MalformedSequence(String),
    #[error("block is not in the language: {0}")]
    BlockNotInLanguage(String),
    #[error("presentation is not {m}-step: {detail}")]
    NotMStep { m: usize, detail: String },
    #[error("closure violated by {left} * {right}")]
    ClosureViolation { left: String, right: String },
    #[error("zero divisor: {0}")]
    ZeroDivisorDetected(String),
    #[error("coset law violated: {0}")]
    LawViolation(String),
    #[error("tau is not well defined: {0}")]
    WellDefinednessViolation(String),
    #[error("H is not trivial (order {0})")]
    HNotTrivial(String),
    #[error("preimage is not unique: {0}")]
    NonUniquePreimage(String),
    #[error("depth {0} exhausted")]
    DepthExhausted(usize),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error at {pointer}: {message}")]
    Validation { pointer: String, message: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Validation { pointer: pointer.into(), message: message.into() }
}
