//! Offline Half-Broadcast via one Pony Express solve per crossing candidate.
//!
//! Delivering to endpoint `d` needs at most one robot from the other half,
//! and that robot only helps if it picks the message up at the source. So
//! for each candidate `l` on the far side, mirror `l` onto the near side and
//! keep only near-side robots at least as fast as `l` — slower ones could
//! otherwise hand the message to a mirrored `l` that is physically still on
//! the other side.
//!
//! A robot at exactly `0` belongs to both halves.

use crate::error::{Error, Result};
use crate::model::{HandoverEvent, Robot, Side, SolveResult, ValidatedInstance, Variant};
use crate::pony::solve_pony_robots;

/// Fastest delivery to endpoint `d`, with the chain in original coordinates.
pub fn direction_time(instance: &ValidatedInstance, d: Side) -> f64 {
    direction_plan(&instance.robots, d).map_or(f64::INFINITY, |(t, _)| t)
}

/// Positions seen from endpoint `d`: `d` becomes `+1`.
pub(crate) fn oriented(robots: &[Robot], d: Side) -> Vec<Robot> {
    let s = d.sign();
    robots.iter().map(|r| Robot { p: s * r.p + 0.0, ..*r }).collect()
}

pub(crate) fn orient_chain(chain: Vec<HandoverEvent>, d: Side) -> Vec<HandoverEvent> {
    match d {
        Side::Pos => chain,
        Side::Neg => chain.into_iter().map(HandoverEvent::mirrored).collect(),
    }
}

fn direction_plan(robots: &[Robot], d: Side) -> Option<(f64, Vec<HandoverEvent>)> {
    let local = oriented(robots, d);
    let near: Vec<Robot> = local.iter().copied().filter(|r| r.p >= 0.0).collect();
    let mut best: Option<(f64, Vec<HandoverEvent>)> = None;
    let mut consider = |set: &[Robot]| {
        if let Ok((t, chain)) = solve_pony_robots(set) {
            if best.as_ref().is_none_or(|(b, _)| t < *b) {
                best = Some((t, chain));
            }
        }
    };
    consider(&near);
    for l in local.iter().filter(|r| r.p <= 0.0) {
        let mut set: Vec<Robot> = near
            .iter()
            .copied()
            .filter(|r| r.id != l.id && r.v >= l.v)
            .collect();
        set.push(l.reflected());
        consider(&set);
    }
    best.map(|(t, chain)| (t, orient_chain(chain, d)))
}

/// Optimal time to reach either endpoint.
///
/// `time_pos` / `time_neg` hold the best time for each endpoint; ties go to
/// the positive endpoint.
pub fn solve_half_broadcast(instance: &ValidatedInstance) -> Result<SolveResult> {
    if instance.variant != Variant::HalfBroadcast {
        return Err(Error::VariantMismatch { expected: "half_broadcast", found: instance.variant });
    }
    let pos = direction_plan(&instance.robots, Side::Pos);
    let neg = direction_plan(&instance.robots, Side::Neg);
    let time = |p: &Option<(f64, _)>| p.as_ref().map_or(f64::INFINITY, |(t, _)| *t);
    let (tp, tn) = (time(&pos), time(&neg));
    let (direction, winner) = if tn < tp { (Side::Neg, neg) } else { (Side::Pos, pos) };
    let (objective, chain) = winner.ok_or(Error::NoDelivery)?;
    Ok(SolveResult {
        variant: Variant::HalfBroadcast,
        objective,
        time_pos: Some(tp),
        time_neg: Some(tn),
        direction: Some(direction),
        chains: vec![chain],
        split: None,
    })
}
