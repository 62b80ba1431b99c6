use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. Variant names are stable: the CLI
/// surfaces them verbatim as the `kind` of its error objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("size cap exceeded: {0}")]
    SizeCapExceeded(String),
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("composition undefined: inner series has valuation {0} < 1")]
    CompositionUndefined(i64),
    #[error("not a simple root: {0}")]
    NotSimpleRoot(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("pole order divisible by p: {0}")]
    PoleOrderDivisibleByP(String),
    #[error("field of order {order} lacks primitive {m}-th roots of unity")]
    MissingRootsOfUnity { order: u64, m: u64 },
    #[error("not Galois over the base: {0}")]
    NotGaloisOverBase(String),
    #[error("wild inertia is not a p-group: {0}")]
    NotPGroupWildPart(String),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("mismatch detected at u = {0}")]
    MismatchDetected(String),
    #[error("representation and filtration use different groups")]
    GroupMismatch,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("p-Sylow subgroup is not normal")]
    PSylowNotNormal,
    #[error("quotient by the p-Sylow subgroup is not cyclic")]
    QuotientNotCyclic,
    #[error("no complement of order {0} found")]
    ComplementNotFound(u64),
    #[error("overflow policy exceeded: {0}")]
    OverflowPolicyExceeded(String),
    #[error("no Jordan bound configured for rank {0}")]
    NoBoundConfigured(u32),
    #[error("inconsistent counts: {0}")]
    InconsistentCounts(String),
    #[error("no such quotient: {0}")]
    NoSuchQuotient(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable variant name.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::SizeCapExceeded(_) => "SizeCapExceeded",
            Error::ZeroElement => "ZeroElement",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::FieldMismatch => "FieldMismatch",
            Error::CompositionUndefined(_) => "CompositionUndefined",
            Error::NotSimpleRoot(_) => "NotSimpleRoot",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::PoleOrderDivisibleByP(_) => "PoleOrderDivisibleByP",
            Error::MissingRootsOfUnity { .. } => "MissingRootsOfUnity",
            Error::NotGaloisOverBase(_) => "NotGaloisOverBase",
            Error::NotPGroupWildPart(_) => "NotPGroupWildPart",
            Error::NotAbelian => "NotAbelian",
            Error::MismatchDetected(_) => "MismatchDetected",
            Error::GroupMismatch => "GroupMismatch",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::NotAGroup(_) => "NotAGroup",
            Error::PSylowNotNormal => "PSylowNotNormal",
            Error::QuotientNotCyclic => "QuotientNotCyclic",
            Error::ComplementNotFound(_) => "ComplementNotFound",
            Error::OverflowPolicyExceeded(_) => "OverflowPolicyExceeded",
            Error::NoBoundConfigured(_) => "NoBoundConfigured",
            Error::InconsistentCounts(_) => "InconsistentCounts",
            Error::NoSuchQuotient(_) => "NoSuchQuotient",
            Error::NotHomomorphism(_) => "NotHomomorphism",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}
