use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} does not belong to the scheme of {algebra}")]
    SchemeMismatch { index: String, algebra: String },
    #[error("depth must be at least 1")]
    InvalidDepth,
    #[error("algebra is not finite dimensional")]
    NotFiniteDimensional,
    #[error("product is degenerate: {0}")]
    DegenerateProduct(String),
    #[error("coproduct is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("oracle inconsistent with multiplier actions: {0}")]
    OracleInconsistent(String),
    #[error("span solve failed: {0}")]
    SpanSolveFailed(String),
    #[error("q-rule is not idempotent at {0}")]
    NonIdempotentQ(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{gate} gate failed: {witness}")]
    GateFailed { gate: String, witness: String },
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("slice is not an element of the algebra: {0}")]
    SliceNotFinite(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
}
