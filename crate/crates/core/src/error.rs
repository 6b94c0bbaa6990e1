use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("field order {0}^{1} exceeds the supported ceiling")]
    FieldTooLarge(u64, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a subfield order of the ambient field")]
    BadSubfield(u64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("mixed fields: {0}")]
    FieldMismatch(String),
    #[error("ambient space mismatch: {0}")]
    AmbientMismatch(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("invalid collection: {0}")]
    InvalidCollection(String),
    #[error("size ceiling exceeded: {0}")]
    CeilingExceeded(String),
    #[error("rank table fails axiom {axiom} on subspace pair ({} , {})", ids.0, ids.1)]
    AxiomViolation { axiom: u8, ids: (usize, usize) },
    #[error("degenerate rank: {0}")]
    DegenerateRank(String),
    #[error("distance undefined: fewer than two codewords")]
    UndefinedDistance,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
