use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two operands disagree on a structural size (variable count, vertex count, length).
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// An index or size falls outside the supported range.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("weight data outside the admissible domain: {0}")]
    Domain(String),
    /// A caller-supplied parameter violates an operation's precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("{0} is not a face of the complex")]
    NotAFace(String),
    #[error("not a simple wall crossing")]
    NotSimpleCrossing,
    #[error("complex is not a cone over its first {0} vertices")]
    NotACone(usize),
    #[error("unknown class id {0}")]
    UnknownClass(u32),
    /// A gated unweighted descendant was requested that the target table does not provide.
    #[error("oracle incomplete: no table entry for {0}")]
    OracleIncomplete(String),
    /// A product of two non-unit classes was needed but not declared in the target.
    #[error("product {0}*{1} is not specified by the target")]
    MissingProduct(u32, u32),
}

pub type Result<T> = std::result::Result<T, Error>;
