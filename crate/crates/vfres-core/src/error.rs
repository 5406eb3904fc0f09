use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Every failure the engine can report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    MalformedSupport(String),
    ZeroField,
    EmptySupport,
    EmptySection,
    NotDivisorPoint,
    NotAdapted(String),
    IrrationalPreparation(String),
    AlreadyEdgeStable,
    AlreadyStable,
    CapExceeded(String),
    DegenerateResult(String),
    NonIntegralResult(String),
    UnsupportedPattern(String),
    MissingDisplacement,
    NotStable,
    MissingEdge,
    NoSupportingPlane,
    IrrationalFiberPoint(usize),
    NonIsolatedFiber,
    CycleDetected,
    IndexLawViolation(String),
    DecreaseViolation(String),
    InconsistentPair,
    PreconditionViolated(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Error::*;
        match self {
            MalformedSupport(s) => write!(f, "malformed support: {s}"),
            ZeroField => write!(f, "zero vector field"),
            EmptySupport => write!(f, "empty support"),
            EmptySection => write!(f, "derived polygon section is empty"),
            NotDivisorPoint => write!(f, "data is not centered at a divisor point"),
            NotAdapted(s) => write!(f, "chart is not adapted: {s}"),
            IrrationalPreparation(s) => write!(f, "preparation needs an irrational parameter: {s}"),
            AlreadyEdgeStable => write!(f, "data is already edge stable"),
            AlreadyStable => write!(f, "data is already stable"),
            CapExceeded(s) => write!(f, "cap exceeded: {s}"),
            DegenerateResult(s) => write!(f, "degenerate transform: {s}"),
            NonIntegralResult(s) => write!(f, "non-integral transform: {s}"),
            UnsupportedPattern(s) => write!(f, "unsupported pattern: {s}"),
            MissingDisplacement => write!(f, "displacement undefined"),
            NotStable => write!(f, "data is not stable"),
            MissingEdge => write!(f, "generic main edge missing"),
            NoSupportingPlane => write!(f, "no supporting plane isolates the vertex"),
            IrrationalFiberPoint(n) => write!(f, "{n} irrational fiber point candidate(s)"),
            NonIsolatedFiber => write!(f, "nonelementary locus in the fiber is not isolated"),
            CycleDetected => write!(f, "cycle detected"),
            IndexLawViolation(s) => write!(f, "divisor index law violated: {s}"),
            DecreaseViolation(s) => write!(f, "invariant did not decrease: {s}"),
            InconsistentPair => write!(f, "descriptor pair matches no transition"),
            PreconditionViolated(s) => write!(f, "precondition violated: {s}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
