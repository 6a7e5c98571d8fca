use crate::rational::Q;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("space has no points")]
    EmptySpace,
    #[error("weight {0} is not strictly positive")]
    NonPositiveWeight(Q),
    #[error("weights sum to {0}, not 1")]
    WeightsDontSumToOne(Q),
    #[error("operands live on different spaces")]
    SpaceMismatch,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("point {0} is out of range")]
    PointOutOfRange(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("observable is negative at point {0}")]
    NegativeObservable(usize),
    #[error("observable leaves the admissible range at point {0}")]
    ObservableOutOfRange(usize),
    #[error("at least one partition is required")]
    NoPartitions,
    #[error("map is not a bijection: {0}")]
    NotBijective(String),
    #[error("map does not preserve the weight of point {0}")]
    NotMeasurePreserving(usize),
    #[error("transformations do not commute at point {0}")]
    DoesNotCommute(usize),
    #[error("not a factor map: {0}")]
    NotAFactorMap(String),
    #[error("{what} has size {size}, above the limit {limit}")]
    SizeLimitExceeded { what: &'static str, size: u128, limit: u128 },
    #[error("set is empty or has zero measure")]
    EmptySet,
    #[error("epsilon {0} must be positive")]
    NonPositiveEpsilon(Q),
    #[error("system is not ergodic; pass the override to scan anyway")]
    NotErgodic,
    #[error("character frequency {t} does not have a denominator dividing the period {period}")]
    InvalidFrequency { t: Q, period: u64 },
    #[error("shift must be nonzero")]
    ZeroShift,
    #[error("value {0} is out of range")]
    OutOfRange(Q),
    #[error("invalid cylinder observable: {0}")]
    InvalidCylinder(String),
    #[error("invalid Bernoulli specification: {0}")]
    InvalidBernoulli(String),
}

pub type Result<T> = std::result::Result<T, Error>;
