//! Domain types shared by every solver and the simulator.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for time and position comparisons.
pub const EPS: f64 = 1e-9;

pub type RobotId = u32;

/// A mobile agent: identity, signed starting position and speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Robot {
    pub id: RobotId,
    pub p: f64,
    pub v: f64,
}

impl Robot {
    pub fn new(id: RobotId, p: f64, v: f64) -> Self {
        Self { id, p, v }
    }

    /// Time to walk to the message source at full speed.
    pub fn time_to_source(&self) -> f64 {
        self.p.abs() / self.v
    }

    /// Delivery time when this robot works alone toward one endpoint.
    pub fn solo_time(&self) -> f64 {
        (self.p.abs() + 1.0) / self.v
    }

    pub fn reflected(&self) -> Self {
        Self { p: 0.0 - self.p, ..*self }
    }

    /// Side used for set partitions: a robot at exactly 0 counts as positive.
    pub fn side(&self) -> Side {
        Side::of(self.p)
    }
}

/// One of the two endpoints of `[-1, 1]`, or a half of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Neg,
    Pos,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Pos, Side::Neg];

    pub fn of(x: f64) -> Self {
        if x < 0.0 {
            Side::Neg
        } else {
            Side::Pos
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Side::Pos => 1.0,
            Side::Neg => -1.0,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Side::Pos => Side::Neg,
            Side::Neg => Side::Pos,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Pos => "+1",
            Side::Neg => "-1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "pony")]
    PonyExpress,
    #[serde(rename = "half_broadcast")]
    HalfBroadcast,
    #[serde(rename = "broadcast")]
    Broadcast,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::PonyExpress, Variant::HalfBroadcast, Variant::Broadcast];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::PonyExpress => "pony",
            Variant::HalfBroadcast => "half_broadcast",
            Variant::Broadcast => "broadcast",
        }
    }

    /// The closed interval robots live in.
    pub fn domain(self) -> (f64, f64) {
        match self {
            Variant::PonyExpress => (0.0, 1.0),
            Variant::HalfBroadcast | Variant::Broadcast => (-1.0, 1.0),
        }
    }

    pub fn is_two_sided(self) -> bool {
        !matches!(self, Variant::PonyExpress)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pony" => Ok(Variant::PonyExpress),
            "half_broadcast" => Ok(Variant::HalfBroadcast),
            "broadcast" => Ok(Variant::Broadcast),
            other => Err(Error::UnknownVariant(other.to_string())),
        }
    }
}

/// Raw, unchecked problem input. The message always starts at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub variant: Variant,
    pub robots: Vec<Robot>,
}

impl ProblemInstance {
    pub fn new(variant: Variant, robots: Vec<Robot>) -> Self {
        Self { variant, robots }
    }

    /// Convenience constructor assigning ids `0..n` in the given order.
    pub fn from_pairs(variant: Variant, pairs: &[(f64, f64)]) -> Self {
        let robots = pairs
            .iter()
            .enumerate()
            .map(|(i, &(p, v))| Robot::new(i as RobotId, p, v))
            .collect();
        Self { variant, robots }
    }

    /// Checks the instance and returns it with robots sorted by position.
    ///
    /// Robots sharing a position are ordered faster first, then by id.
    pub fn validate(mut self) -> Result<ValidatedInstance> {
        if self.robots.is_empty() {
            return Err(Error::EmptyRobotSet);
        }
        let (lo, hi) = self.variant.domain();
        for r in &self.robots {
            if !r.p.is_finite() || r.p < lo || r.p > hi {
                return Err(Error::PositionOutOfDomain { id: r.id, p: r.p });
            }
            if !(r.v.is_finite() && r.v > 0.0) {
                return Err(Error::NonPositiveSpeed { id: r.id, v: r.v });
            }
        }
        let mut ids: Vec<RobotId> = self.robots.iter().map(|r| r.id).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateId(w[0]));
        }
        for r in &mut self.robots {
            // fold -0.0 into 0.0 so ordering and sides agree
            r.p += 0.0;
        }
        sort_robots(&mut self.robots);
        Ok(ValidatedInstance(self))
    }
}

/// Canonical robot order: by position, then faster first, then lower id.
pub fn robot_order(a: &Robot, b: &Robot) -> Ordering {
    a.p.total_cmp(&b.p)
        .then_with(|| b.v.total_cmp(&a.v))
        .then_with(|| a.id.cmp(&b.id))
}

pub fn sort_robots(robots: &mut [Robot]) {
    robots.sort_by(robot_order);
}

/// A [`ProblemInstance`] that passed [`ProblemInstance::validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ValidatedInstance(ProblemInstance);

impl ValidatedInstance {
    pub fn into_inner(self) -> ProblemInstance {
        self.0
    }

    /// Mirror image `p -> -p` of a two-sided instance.
    pub fn reflect(&self) -> Result<ValidatedInstance> {
        if !self.variant.is_two_sided() {
            return Err(Error::VariantMismatch {
                expected: "half_broadcast or broadcast",
                found: self.variant,
            });
        }
        let robots = self.robots.iter().map(Robot::reflected).collect();
        ProblemInstance::new(self.variant, robots).validate()
    }

    pub fn with_variant(&self, variant: Variant) -> Result<ValidatedInstance> {
        ProblemInstance::new(variant, self.robots.clone()).validate()
    }

    pub fn robot(&self, id: RobotId) -> Option<&Robot> {
        self.robots.iter().find(|r| r.id == id)
    }

    pub fn min_speed(&self) -> f64 {
        self.robots.iter().map(|r| r.v).fold(f64::INFINITY, f64::min)
    }

    pub fn max_speed(&self) -> f64 {
        self.robots.iter().map(|r| r.v).fold(0.0, f64::max)
    }

    pub fn max_abs_position(&self) -> f64 {
        self.robots.iter().map(|r| r.p.abs()).fold(0.0, f64::max)
    }
}

impl Deref for ValidatedInstance {
    type Target = ProblemInstance;

    fn deref(&self) -> &ProblemInstance {
        &self.0
    }
}

/// Who hands the message over, or who receives it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Participant {
    Source,
    Robot(RobotId),
    Endpoint(Side),
}

impl fmt::Display for Participant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Participant::Source => f.write_str("source"),
            Participant::Robot(id) => write!(f, "r{id}"),
            Participant::Endpoint(s) => write!(f, "endpoint{s}"),
        }
    }
}

/// One link of a relay chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HandoverEvent {
    pub t: f64,
    pub x: f64,
    pub giver: Participant,
    pub receiver: Participant,
}

impl HandoverEvent {
    pub fn new(t: f64, x: f64, giver: Participant, receiver: Participant) -> Self {
        Self { t, x, giver, receiver }
    }

    pub fn mirrored(self) -> Self {
        let flip = |p: Participant| match p {
            Participant::Endpoint(s) => Participant::Endpoint(s.opposite()),
            other => other,
        };
        Self {
            x: -self.x,
            giver: flip(self.giver),
            receiver: flip(self.receiver),
            ..self
        }
    }
}

/// Robots that carried the message along a chain, in order.
pub fn chain_carriers(chain: &[HandoverEvent]) -> Vec<RobotId> {
    chain
        .iter()
        .filter_map(|e| match e.receiver {
            Participant::Robot(id) => Some(id),
            _ => None,
        })
        .collect()
}

/// How a broadcast solution routes the message across the source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitPlan {
    /// Robot taking part in the delivery to both endpoints.
    pub crossing: RobotId,
    /// Robot (or endpoint) the crossing robot hands the message to.
    pub receiver: Participant,
    /// Half of the segment where that handover happens.
    pub side: Side,
    /// Handover position (signed).
    pub m: f64,
    /// Handover time.
    pub t: f64,
    pub time_pos: f64,
    pub time_neg: f64,
    pub objective: f64,
}

/// Offline solver output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub variant: Variant,
    pub objective: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_pos: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_neg: Option<f64>,
    /// Endpoint reached in the optimal half-broadcast schedule.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<Side>,
    pub chains: Vec<Vec<HandoverEvent>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitPlan>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_pony_instance_is_valid() {
        let inst = ProblemInstance::from_pairs(Variant::PonyExpress, &[(0.5, 1.0)]);
        assert!(inst.validate().is_ok());
    }

    #[test]
    fn pony_position_outside_unit_interval_is_rejected() {
        let inst = ProblemInstance::from_pairs(Variant::PonyExpress, &[(1.5, 1.0)]);
        assert!(matches!(inst.validate(), Err(Error::PositionOutOfDomain { .. })));
        let inst = ProblemInstance::from_pairs(Variant::PonyExpress, &[(-0.1, 1.0)]);
        assert!(matches!(inst.validate(), Err(Error::PositionOutOfDomain { .. })));
    }

    #[test]
    fn broadcast_with_robot_at_source_is_valid() {
        let inst = ProblemInstance::from_pairs(Variant::Broadcast, &[(0.0, 1.0), (0.5, 0.5)]);
        let v = inst.validate().unwrap();
        assert_eq!(v.robots.len(), 2);
    }

    #[test]
    fn validation_errors() {
        let empty = ProblemInstance::new(Variant::Broadcast, vec![]);
        assert!(matches!(empty.validate(), Err(Error::EmptyRobotSet)));

        let slow = ProblemInstance::from_pairs(Variant::Broadcast, &[(0.2, 0.0)]);
        assert!(matches!(slow.validate(), Err(Error::NonPositiveSpeed { .. })));

        let nan = ProblemInstance::from_pairs(Variant::Broadcast, &[(f64::NAN, 1.0)]);
        assert!(matches!(nan.validate(), Err(Error::PositionOutOfDomain { .. })));

        let dup = ProblemInstance::new(
            Variant::Broadcast,
            vec![Robot::new(3, 0.1, 1.0), Robot::new(3, 0.2, 1.0)],
        );
        assert!(matches!(dup.validate(), Err(Error::DuplicateId(3))));
    }

    #[test]
    fn ties_sort_faster_first_then_by_id() {
        let inst = ProblemInstance::new(
            Variant::Broadcast,
            vec![
                Robot::new(5, 0.3, 1.0),
                Robot::new(1, 0.3, 1.0),
                Robot::new(2, 0.3, 2.0),
                Robot::new(9, -0.3, 0.1),
            ],
        )
        .validate()
        .unwrap();
        let ids: Vec<_> = inst.robots.iter().map(|r| r.id).collect();
        assert_eq!(ids, vec![9, 2, 1, 5]);
    }

    #[test]
    fn reflect_negates_positions() {
        let inst = ProblemInstance::from_pairs(Variant::HalfBroadcast, &[(-1.0, 1.0), (0.0, 0.5)])
            .validate()
            .unwrap();
        let r = inst.reflect().unwrap();
        let got: Vec<_> = r.robots.iter().map(|r| (r.p, r.v)).collect();
        assert_eq!(got, vec![(0.0, 0.5), (1.0, 1.0)]);
        assert_eq!(r.reflect().unwrap(), inst);
    }

    #[test]
    fn reflect_rejects_pony() {
        let inst = ProblemInstance::from_pairs(Variant::PonyExpress, &[(0.5, 1.0)])
            .validate()
            .unwrap();
        assert!(matches!(inst.reflect(), Err(Error::VariantMismatch { .. })));
    }
}
