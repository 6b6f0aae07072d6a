use thiserror::Error;

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("ring mismatch between operands")]
    RingMismatch,

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("not bihomogeneous: {0}")]
    NotBihomogeneous(String),

    #[error("invalid module presentation: {0}")]
    InvalidModule(String),

    #[error("zero module has no Krull dimension")]
    ZeroModule,

    /// No vanishing base degree was found before the cutoff. Either the
    /// quotient has infinite length over the base ring (the support of the
    /// module meets the exceptional locus outside the closed fiber) or the
    /// cutoff is too small.
    #[error("length not certified finite in fiber degree {fiber_degree} by base degree {cutoff} (infinite length, or cutoff too small)")]
    InfiniteOrCutoff { fiber_degree: u32, cutoff: u32 },

    #[error("support condition violated: {0}")]
    SupportCondition(String),

    #[error("grid too small: {0}")]
    GridTooSmall(String),

    #[error("degree exceeds {r}: difference of order {order:?} at {point:?} is {value}")]
    DegreeExceeds {
        r: u32,
        order: Vec<u32>,
        point: Vec<usize>,
        value: String,
    },

    #[error("leading coefficient not stable in k: e = {at_k} at k = {k}, e = {at_k_plus_one} at k + 1; increase k")]
    KInstability {
        k: u32,
        at_k: String,
        at_k_plus_one: String,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI's structured errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::FieldMismatch { .. } => "field-mismatch",
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::RingMismatch => "ring-mismatch",
            Error::InvalidRing(_) => "invalid-ring",
            Error::NotBihomogeneous(_) => "not-bihomogeneous",
            Error::InvalidModule(_) => "invalid-module",
            Error::ZeroModule => "zero-module",
            Error::InfiniteOrCutoff { .. } => "infinite-or-cutoff",
            Error::SupportCondition(_) => "support-condition",
            Error::GridTooSmall(_) => "grid-too-small",
            Error::DegreeExceeds { .. } => "degree-exceeds-r",
            Error::KInstability { .. } => "k-instability",
            Error::Precondition(_) => "precondition",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
