//! Exact-arithmetic toolkit for weighted Hamming metrics over small
//! finite fields: weight-preserving map extension, unique-decomposition
//! checks, and constant-weight code analysis.

pub mod cli;
pub mod cwc;
pub mod extension;
pub mod gf;
pub mod identities;
pub mod instance;
pub mod linalg;
pub mod sampling;
pub mod wspace;

/// Default ceiling on enumeration sizes (subspaces, superspaces, vectors).
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("p = {0} is not prime")]
    NonPrime(u64),
    #[error("extension degree m = {0} must be at least 1")]
    BadExtensionDegree(u32),
    #[error("field order exceeds the supported maximum of 256")]
    FieldTooLarge,
    #[error("malformed modulus: {0}")]
    MalformedModulus(String),
    #[error("modulus polynomial is reducible")]
    ReducibleModulus,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element index {index} outside field of order {q}")]
    ElementOutOfRange { index: u64, q: u16 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix rows are linearly dependent")]
    RankDeficient,
    #[error("enumeration would visit {needed} items, exceeding the cap of {cap}")]
    CapExceeded { needed: u128, cap: u64 },
    #[error("weight of coordinate {0} must be a positive rational")]
    NonpositiveWeight(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("the two maps are not locally equivalent")]
    NotLocallyEquivalent,
    #[error("per-point column weight sums are not all equal")]
    NotConstantWeight,
    #[error("class weight multisets have unequal sums")]
    UnequalClassSums,
    #[error("subset enumeration supports at most {max} coordinates, got {got}")]
    SizeGuard { got: usize, max: usize },
    #[error("weight values violate the unique-decomposition property")]
    UdpViolated,
    #[error("{0}")]
    Unsupported(String),
}
