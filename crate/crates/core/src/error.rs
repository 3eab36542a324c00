use thiserror::Error;

use crate::model::{RobotId, Variant};

#[derive(Debug, Error)]
pub enum Error {
    #[error("instance has no robots")]
    EmptyRobotSet,
    #[error("robot {id} at position {p} lies outside the domain")]
    PositionOutOfDomain { id: RobotId, p: f64 },
    #[error("robot {id} has non-positive or non-finite speed {v}")]
    NonPositiveSpeed { id: RobotId, v: f64 },
    #[error("duplicate robot id {0}")]
    DuplicateId(RobotId),
    #[error("operation expects {expected}, got {found}")]
    VariantMismatch { expected: &'static str, found: Variant },
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("adversary parameter y = {0} is outside [0, 1/2]")]
    YOutOfRange(f64),
    #[error("malformed instance document: {0}")]
    MalformedDocument(String),
    #[error("unknown variant {0:?}")]
    UnknownVariant(String),
    #[error("the message cannot be delivered")]
    NoDelivery,
    #[error("eps must be positive, got {0}")]
    EpsNonPositive(f64),
    #[error("handover position {m} outside feasible interval [{lo}, {hi}]")]
    InfeasibleM { m: f64, lo: f64, hi: f64 },
    #[error("simulation exceeded its horizon of {horizon} time units")]
    SimulationHorizonExceeded { horizon: f64 },
    #[error("brute-force oracle supports at most {max} robots, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("invalid source/destination geometry: {0}")]
    InvalidGeometry(String),
}

pub type Result<T> = std::result::Result<T, Error>;
