use thiserror::Error;

/// Errors raised while building or computing with finite structures.
///
/// Variants that come out of exhaustive validation name the offending
/// identifiers so the caller can locate the problem in its input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("composite {g} . {f} is missing from the composition table")]
    CompositionUndefined { g: String, f: String },
    #[error("composition entry {g} . {f} = {gf} is ill-typed: {detail}")]
    CompositionIllTyped {
        g: String,
        f: String,
        gf: String,
        detail: String,
    },
    #[error("associativity fails for ({h} . {g}) . {f}")]
    AssociativityViolation { h: String, g: String, f: String },
    #[error("identity {identity} is not a unit for {morphism}")]
    UnitViolation { identity: String, morphism: String },
    #[error("functoriality fails at {object} / {morphism}: {detail}")]
    FunctorialityViolation {
        object: String,
        morphism: String,
        detail: String,
    },
    #[error("naturality fails along {morphism} at element {element}")]
    NaturalityViolation { morphism: String, element: String },
    #[error("{0}")]
    Invalid(String),
    #[error("size limit exceeded: {needed} > {limit} ({what})")]
    SizeLimitExceeded {
        what: String,
        needed: u128,
        limit: u64,
    },
    #[error("search budget of {limit} nodes exceeded")]
    BudgetExceeded { limit: u64 },
    #[error("children of `{label}` do not match its fiber: {detail}")]
    FiberMismatch { label: String, detail: String },
    #[error("morphism {morphism} does not end at the object {object} of the tree")]
    TargetMismatch { morphism: String, object: String },
    #[error("pseudo-equivalence condition ({condition}) fails at {witness}")]
    ConditionFailed { condition: u8, witness: String },
    #[error("image of the relation is not an equivalence relation at {object}: {detail}")]
    ImageNotEquivalence { object: String, detail: String },
    #[error("dimension out of range: {0}")]
    DimensionOutOfRange(String),
    #[error("square does not commute at {0}")]
    NotCommuting(String),
    #[error("filler transport failed at stage `{stage}`")]
    TransportFailed { stage: &'static str },
    #[error("degree condition fails for {0}")]
    DegreeViolation(String),
    #[error("no factorization of {0} as a minus map followed by a plus map")]
    FactorizationMissing(String),
    #[error("factorization of {morphism} is not unique: {first} vs {second}")]
    FactorizationNotUnique {
        morphism: String,
        first: String,
        second: String,
    },
    #[error("sections are incompatible: {0}")]
    SectionIncompatible(String),
    #[error("hom-set square at {0} is not a pushout")]
    HomPushoutFailed(String),
    #[error("map is not equivariant at {0}")]
    NotEquivariant(String),
    #[error("map is not injective at {0}")]
    NotMono(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn unknown(kind: &'static str, name: impl Into<String>) -> Error {
    Error::Unknown {
        kind,
        name: name.into(),
    }
}
