//! Offline Broadcast: additive approximation over single-crossing splits.
//!
//! At most one robot `l` needs to serve both halves. It walks to the
//! source, carries the message out to some point `m` on half `s`, hands it
//! to a receiver there and walks back across the source to help the other
//! half. Fixing `(l, receiver, m)` leaves two independent one-sided
//! problems, each solved by [`solve_gpe`]:
//!
//! * half `s`: the message appears at `m` at time `t = (|p(l)| + m)/v(l)`;
//!   the other robots of that half walk to `m` and wait there;
//! * the other half: ordinary relay from the source, plus `l` appearing at
//!   the source at time `t + m/v(l)`.
//!
//! The receiver pins the range of `m` where the handover is physically
//! possible; a virtual receiver at the endpoint stands for `l` finishing
//! half `s` alone. The delivery time is searched over that range.
//!
//! Positions below are "local": distances from the source measured toward
//! the half in question.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gpe::{solve_gpe, GpeInstance, GpeRobot};
use crate::half_broadcast::orient_chain;
use crate::model::{
    HandoverEvent, Participant, Robot, Side, SolveResult, SplitPlan, ValidatedInstance, Variant, EPS,
};
use crate::pony::solve_pony_robots;
use crate::search::bracketed_min;

/// Coarse scan resolution applied before the ternary polish.
const SCAN: usize = 16;

/// Who takes the message from the crossing robot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Receiver {
    Robot(Robot),
    /// Zero-speed stand-in parked at an endpoint.
    Endpoint(Side),
}

impl Receiver {
    pub fn side(&self) -> Side {
        match self {
            Receiver::Robot(r) => r.side(),
            Receiver::Endpoint(s) => *s,
        }
    }

    fn participant(&self) -> Participant {
        match self {
            Receiver::Robot(r) => Participant::Robot(r.id),
            Receiver::Endpoint(s) => Participant::Endpoint(*s),
        }
    }
}

/// Work counters, exposed for complexity checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BroadcastStats {
    pub pairs: usize,
    pub evaluations: usize,
}

/// Both halves served by their own robots only. `+inf` when a half is empty.
pub fn no_crossing_time(instance: &ValidatedInstance) -> f64 {
    no_crossing(&instance.robots).map_or(f64::INFINITY, |p| p.0)
}

#[allow(clippy::type_complexity)]
fn no_crossing(robots: &[Robot]) -> Option<(f64, f64, f64, Vec<Vec<HandoverEvent>>)> {
    let (pos, neg): (Vec<Robot>, Vec<Robot>) = robots.iter().partition(|r| r.side() == Side::Pos);
    let neg: Vec<Robot> = neg.iter().map(Robot::reflected).collect();
    let (tp, cp) = solve_pony_robots(&pos).ok()?;
    let (tn, cn) = solve_pony_robots(&neg).ok()?;
    Some((tp.max(tn), tp, tn, vec![cp, orient_chain(cn, Side::Neg)]))
}

/// Local range `[lo, hi]` of handover points between `l` and `receiver`.
///
/// Distances are measured from the source toward the receiver's half. `lo`
/// is where the two meet head-on (or the source, if the receiver gets there
/// first and waits); above it `l` can still catch a slower receiver walking
/// away from the source, up to the endpoint.
pub fn feasible_m_interval(l: &Robot, receiver: &Receiver) -> (f64, f64) {
    let r = match receiver {
        Receiver::Endpoint(_) => return (1.0, 1.0),
        Receiver::Robot(r) => r,
    };
    let d = l.p.abs();
    let y = r.p.abs();
    let k = r.v / l.v;
    let lo = ((y - k * d) / (1.0 + k)).max(0.0);
    let hi = if l.v > r.v { ((y + k * d) / (1.0 - k)).min(1.0) } else { lo };
    (lo, hi.max(lo))
}

struct SplitEval {
    here: f64,
    there: f64,
    chains: Option<(Vec<HandoverEvent>, Vec<HandoverEvent>)>,
}

/// Core of [`eval_split`] in local coordinates; `s` is the handover half.
fn split_times(robots: &[Robot], l: &Robot, s: Side, m: f64, with_chains: bool) -> Result<SplitEval> {
    let sigma = s.sign();
    let d = l.p.abs();
    let t = (d + m) / l.v;
    let mut near = Vec::new();
    let mut far = vec![GpeRobot::new(l.id, 0.0, l.v, t + m / l.v)];
    for r in robots.iter().filter(|r| r.id != l.id) {
        if r.side() == s {
            let y = sigma * r.p;
            if y >= m {
                near.push(GpeRobot::new(r.id, y - m, r.v, 0.0));
            } else {
                near.push(GpeRobot::new(r.id, 0.0, r.v, (m - y) / r.v));
            }
        } else {
            far.push(GpeRobot::new(r.id, r.p.abs(), r.v, 0.0));
        }
    }
    let pickup = HandoverEvent::new(d / l.v, 0.0, Participant::Source, Participant::Robot(l.id));
    let (here, near_chain) = if m >= 1.0 || near.is_empty() {
        let chain = vec![
            pickup,
            HandoverEvent::new(t, 1.0, Participant::Robot(l.id), Participant::Endpoint(Side::Pos)),
        ];
        // lone crossing robot finishes this half itself
        ((d + 1.0) / l.v, chain)
    } else {
        let sol = solve_gpe(&GpeInstance { source_pos: m, source_time: t, dest_pos: 1.0, robots: near })?;
        let mut chain = vec![pickup];
        chain.extend(sol.chain);
        chain[1].giver = Participant::Robot(l.id);
        (sol.objective, chain)
    };
    let sol = solve_gpe(&GpeInstance { source_pos: 0.0, source_time: 0.0, dest_pos: 1.0, robots: far })?;
    let chains = with_chains.then(|| (orient_chain(near_chain, s), orient_chain(sol.chain, s.opposite())));
    Ok(SplitEval { here, there: sol.objective, chains })
}

/// Delivery times when `l` hands the message to `receiver` at signed
/// position `m`.
pub fn eval_split(
    instance: &ValidatedInstance,
    l: &Robot,
    receiver: &Receiver,
    m: f64,
) -> Result<SplitPlan> {
    let s = receiver.side();
    let local = s.sign() * m;
    let (lo, hi) = feasible_m_interval(l, receiver);
    if !(local >= lo - EPS && local <= hi + EPS) {
        return Err(Error::InfeasibleM { m, lo: s.sign() * lo, hi: s.sign() * hi });
    }
    let local = local.clamp(lo, hi);
    let ev = split_times(&instance.robots, l, s, local, false)?;
    Ok(plan(l, receiver, local, &ev))
}

fn plan(l: &Robot, receiver: &Receiver, local: f64, ev: &SplitEval) -> SplitPlan {
    let s = receiver.side();
    let (time_pos, time_neg) = match s {
        Side::Pos => (ev.here, ev.there),
        Side::Neg => (ev.there, ev.here),
    };
    SplitPlan {
        crossing: l.id,
        receiver: receiver.participant(),
        side: s,
        m: s.sign() * local + 0.0,
        t: (l.p.abs() + local) / l.v,
        time_pos,
        time_neg,
        objective: time_pos.max(time_neg),
    }
}

/// Where the two halves finish together.
///
/// The half `l` returns to can only get later as `m` grows, so when the
/// handover half dominates at `lo` and not at `hi` the optimum sits at the
/// sign change. The scan can step over that dip when the other half is flat
/// beyond it.
fn balance_point(
    robots: &[Robot],
    l: &Robot,
    s: Side,
    lo: f64,
    hi: f64,
    tol: f64,
    calls: &mut usize,
) -> (f64, f64) {
    let mut times = |m: f64| {
        *calls += 1;
        split_times(robots, l, s, m, false).map_or((f64::INFINITY, f64::INFINITY), |e| (e.here, e.there))
    };
    let (here, there) = times(lo);
    if hi <= lo || there >= here {
        return (lo, here.max(there));
    }
    let (mut a, mut b) = (lo, hi);
    let mut at_b = times(hi);
    if at_b.1 < at_b.0 {
        return (hi, at_b.0.max(at_b.1));
    }
    let mut at_a = (here, there);
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let t = times(mid);
        if t.1 < t.0 {
            (a, at_a) = (mid, t);
        } else {
            (b, at_b) = (mid, t);
        }
    }
    let (va, vb) = (at_a.0.max(at_a.1), at_b.0.max(at_b.1));
    if va <= vb {
        (a, va)
    } else {
        (b, vb)
    }
}

fn objective(robots: &[Robot], l: &Robot, s: Side, m: f64) -> f64 {
    split_times(robots, l, s, m, false).map_or(f64::INFINITY, |e| e.here.max(e.there))
}

/// All `(l, receiver)` pairs in tie-breaking order: crossing robot id, then
/// receiver id, endpoints last.
fn candidate_pairs(robots: &[Robot]) -> Vec<(Robot, Receiver)> {
    let mut by_id = robots.to_vec();
    by_id.sort_by_key(|r| r.id);
    let mut out = Vec::with_capacity(robots.len() * (robots.len() + 1));
    for l in &by_id {
        for r in by_id.iter().filter(|r| r.id != l.id) {
            out.push((*l, Receiver::Robot(*r)));
        }
        for s in Side::BOTH {
            out.push((*l, Receiver::Endpoint(s)));
        }
    }
    out
}

/// Broadcast delivery time within additive `eps` of the optimum.
pub fn solve_broadcast(instance: &ValidatedInstance, eps: f64) -> Result<SolveResult> {
    solve_broadcast_with_stats(instance, eps).map(|(res, _)| res)
}

pub fn solve_broadcast_with_stats(
    instance: &ValidatedInstance,
    eps: f64,
) -> Result<(SolveResult, BroadcastStats)> {
    if instance.variant != Variant::Broadcast {
        return Err(Error::VariantMismatch { expected: "broadcast", found: instance.variant });
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::EpsNonPositive(eps));
    }
    let robots = &instance.robots;
    let tol = eps * instance.min_speed() / 4.0;
    let pairs = candidate_pairs(robots);

    let searched: Vec<(f64, f64, usize)> = pairs
        .par_iter()
        .map(|(l, rec)| {
            let (lo, hi) = feasible_m_interval(l, rec);
            let s = rec.side();
            let mut calls = 0;
            let scanned = bracketed_min(
                |m| {
                    calls += 1;
                    objective(robots, l, s, m)
                },
                lo,
                hi,
                SCAN,
                tol,
            );
            let balanced = balance_point(robots, l, s, lo, hi, tol, &mut calls);
            let (m, v) = if balanced.1 < scanned.1 { balanced } else { scanned };
            (m, v, calls)
        })
        .collect();

    let stats = BroadcastStats {
        pairs: pairs.len(),
        evaluations: searched.iter().map(|x| x.2).sum(),
    };
    let mut best: Option<usize> = None;
    for (i, &(_, v, _)) in searched.iter().enumerate() {
        if best.map_or(v.is_finite(), |b| v < searched[b].1) {
            best = Some(i);
        }
    }

    let base = no_crossing(robots);
    let crossing_wins = match (&base, best) {
        (_, None) => false,
        (None, Some(_)) => true,
        (Some(nc), Some(b)) => searched[b].1 < nc.0,
    };
    let result = if crossing_wins {
        let b = best.unwrap();
        let (l, rec) = &pairs[b];
        let ev = split_times(robots, l, rec.side(), searched[b].0, true)?;
        let split = plan(l, rec, searched[b].0, &ev);
        let (near, far) = ev.chains.unwrap();
        let chains = match rec.side() {
            Side::Pos => vec![near, far],
            Side::Neg => vec![far, near],
        };
        SolveResult {
            variant: Variant::Broadcast,
            objective: split.objective,
            time_pos: Some(split.time_pos),
            time_neg: Some(split.time_neg),
            direction: None,
            chains,
            split: Some(split),
        }
    } else {
        let (objective, tp, tn, chains) = base.ok_or(Error::NoDelivery)?;
        SolveResult {
            variant: Variant::Broadcast,
            objective,
            time_pos: Some(tp),
            time_neg: Some(tn),
            direction: None,
            chains,
            split: None,
        }
    };
    Ok((result, stats))
}
