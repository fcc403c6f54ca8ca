use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty particle set")]
    EmptyParticleSet,
    #[error("particle {index} has non-positive mass")]
    NonPositiveMass { index: usize },
    #[error("particles {first} and {second} start at the same position")]
    CoincidentInitialPositions { first: usize, second: usize },
    #[error("merge requested for particles that do not coincide")]
    NonCoincidentCluster,
    #[error("event cap of {cap} exceeded")]
    EventCapExceeded { cap: usize },
    #[error("policy has {len} decisions but more events were encountered")]
    PolicyExhausted { len: usize },
    #[error("exact backend requires zero tolerance")]
    NonzeroExactTolerance,
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("horizon must be positive")]
    InvalidHorizon,
    #[error("time {0} is outside the trajectory horizon")]
    TimeOutOfRange(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("no certified time found for level {k} within the iteration budget")]
    NoCertificate { k: u32 },
    #[error("malformed subset: {0}")]
    MalformedSubset(String),
    #[error("non-intersection rejection budget exhausted at level {level}")]
    RejectionBudgetExhausted { level: usize },
    #[error("radius schedule cannot be made feasible above the floor")]
    ScheduleInfeasible,
    #[error("epsilon must be positive")]
    InvalidEpsilon,
    #[error("trajectory is malformed: {0}")]
    MalformedTrajectory(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
