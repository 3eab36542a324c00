//! Event-driven simulation of the online relay protocols.
//!
//! Robots know nothing about each other. Everyone walks to the source; a
//! robot that reaches it takes a copy of the message. Whenever a carrier
//! meets a strictly faster robot without the message, the faster one takes
//! over. Per variant:
//!
//! * Pony Express: carriers head to `1`; the run ends on delivery.
//! * Half-Broadcast: carriers head to the endpoint on their own side (a
//!   receiver picks the endpoint nearest the meeting point); the first
//!   delivery ends the run.
//! * Broadcast: as Half-Broadcast, but a giver turns around after a
//!   handover and a carrier turns around at every endpoint; the run ends
//!   once both endpoints have the message.
//!
//! Motion is piecewise linear, so events are found in closed form.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{RobotId, Side, ValidatedInstance, Variant};

/// Events closer together than this are treated as simultaneous.
const TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    SourcePickup,
    Meeting,
    Handover,
    EndpointHit,
    Turnaround,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::SourcePickup => "source_pickup",
            EventKind::Meeting => "meeting",
            EventKind::Handover => "handover",
            EventKind::EndpointHit => "endpoint_hit",
            EventKind::Turnaround => "turnaround",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One logged event. `other` is the second robot of a meeting or handover
/// (the receiver, for handovers).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimEvent {
    pub t: f64,
    pub kind: EventKind,
    pub robot: RobotId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub other: Option<RobotId>,
    pub x: f64,
}

/// State of one robot right after an event; one trace row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: f64,
    pub robot_id: RobotId,
    pub x: f64,
    pub heading: i8,
    pub has_message: bool,
    pub event_type: EventKind,
}

/// Breakpoints `(t, x)` of a robot's piecewise-linear motion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub id: RobotId,
    pub v: f64,
    pub points: Vec<(f64, f64)>,
    /// When the robot first held the message.
    pub acquired: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub variant: Variant,
    pub objective: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_pos: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_neg: Option<f64>,
    pub events: Vec<SimEvent>,
    #[serde(skip)]
    pub trace: Vec<TraceRow>,
    #[serde(skip)]
    pub trajectories: Vec<Trajectory>,
}

#[derive(Debug, Clone)]
struct Agent {
    id: RobotId,
    v: f64,
    x: f64,
    origin: f64,
    heading: i8,
    has_msg: bool,
    version: u32,
    acquired: Option<f64>,
    points: Vec<(f64, f64)>,
}

impl Agent {
    fn velocity(&self) -> f64 {
        self.heading as f64 * self.v
    }
}

/// The next thing that happens, as returned by [`next_event`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Event {
    SourcePickup { t: f64, robot: usize },
    /// Carrier `carrier` meets message-less `other`.
    Meeting { t: f64, carrier: usize, other: usize },
    EndpointHit { t: f64, robot: usize, side: Side },
}

impl Event {
    pub fn time(&self) -> f64 {
        match *self {
            Event::SourcePickup { t, .. } | Event::Meeting { t, .. } | Event::EndpointHit { t, .. } => t,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Event::SourcePickup { .. } => 0,
            Event::Meeting { .. } => 1,
            Event::EndpointHit { .. } => 2,
        }
    }
}

/// Mutable simulation state; robots are indexed in position order.
#[derive(Debug, Clone)]
pub struct SimState {
    variant: Variant,
    clock: f64,
    agents: Vec<Agent>,
    delivered_pos: Option<f64>,
    delivered_neg: Option<f64>,
    seen_meetings: HashSet<(usize, usize, u32, u32)>,
    events: Vec<SimEvent>,
    trace: Vec<TraceRow>,
}

impl SimState {
    pub fn new(instance: &ValidatedInstance) -> Self {
        let agents = instance
            .robots
            .iter()
            .map(|r| Agent {
                id: r.id,
                v: r.v,
                x: r.p,
                origin: r.p,
                heading: if r.p > 0.0 { -1 } else { 1 },
                has_msg: false,
                version: 0,
                acquired: None,
                points: vec![(0.0, r.p)],
            })
            .collect();
        Self {
            variant: instance.variant,
            clock: 0.0,
            agents,
            delivered_pos: None,
            delivered_neg: None,
            seen_meetings: HashSet::new(),
            events: Vec::new(),
            trace: Vec::new(),
        }
    }

    pub fn clock(&self) -> f64 {
        self.clock
    }

    fn finished(&self) -> bool {
        match self.variant {
            Variant::PonyExpress | Variant::HalfBroadcast => {
                self.delivered_pos.is_some() || self.delivered_neg.is_some()
            }
            Variant::Broadcast => self.delivered_pos.is_some() && self.delivered_neg.is_some(),
        }
    }

    fn advance(&mut self, t: f64) {
        let dt = t - self.clock;
        if dt > 0.0 {
            for a in &mut self.agents {
                a.x += a.velocity() * dt;
            }
        }
        self.clock = self.clock.max(t);
    }

    fn set_heading(&mut self, i: usize, heading: i8) {
        let t = self.clock;
        let a = &mut self.agents[i];
        if a.points.last().is_none_or(|&(pt, _)| pt < t) {
            a.points.push((t, a.x));
        }
        a.heading = heading;
        a.version += 1;
    }

    fn take_message(&mut self, i: usize) {
        let t = self.clock;
        let a = &mut self.agents[i];
        a.has_msg = true;
        a.acquired.get_or_insert(t);
        a.version += 1;
    }

    fn log(&mut self, kind: EventKind, i: usize, other: Option<usize>) {
        let a = &self.agents[i];
        self.events.push(SimEvent {
            t: self.clock,
            kind,
            robot: a.id,
            other: other.map(|j| self.agents[j].id),
            x: a.x,
        });
        for k in std::iter::once(i).chain(other) {
            let a = &self.agents[k];
            self.trace.push(TraceRow {
                t: self.clock,
                robot_id: a.id,
                x: a.x,
                heading: a.heading,
                has_message: a.has_msg,
                event_type: kind,
            });
        }
    }

    /// Heading of a fresh carrier standing at `x`.
    fn outward(&self, x: f64, origin: f64, inherited: i8) -> i8 {
        match self.variant {
            Variant::PonyExpress => 1,
            _ if x.abs() <= TIE => {
                if inherited != 0 {
                    inherited
                } else if origin < 0.0 {
                    -1
                } else {
                    1
                }
            }
            _ => {
                if x > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    fn apply(&mut self, ev: Event) {
        self.advance(ev.time());
        match ev {
            Event::SourcePickup { robot, .. } => {
                self.agents[robot].x = 0.0;
                let origin = self.agents[robot].origin;
                let heading = self.outward(0.0, origin, 0);
                self.take_message(robot);
                self.set_heading(robot, heading);
                self.log(EventKind::SourcePickup, robot, None);
            }
            Event::Meeting { carrier, other, .. } => {
                let x = self.agents[carrier].x;
                self.agents[other].x = x;
                if self.agents[other].v > self.agents[carrier].v {
                    let inherited = self.agents[carrier].heading;
                    let heading = self.outward(x, self.agents[other].origin, inherited);
                    self.take_message(other);
                    self.set_heading(other, heading);
                    self.log(EventKind::Handover, carrier, Some(other));
                    if self.variant == Variant::Broadcast {
                        self.set_heading(carrier, -inherited);
                        self.log(EventKind::Turnaround, carrier, None);
                    }
                } else {
                    let key = (carrier, other, self.agents[carrier].version, self.agents[other].version);
                    self.seen_meetings.insert(key);
                    self.log(EventKind::Meeting, carrier, Some(other));
                }
            }
            Event::EndpointHit { robot, side, .. } => {
                let t = self.clock;
                self.agents[robot].x = side.sign();
                match side {
                    Side::Pos => self.delivered_pos.get_or_insert(t),
                    Side::Neg => self.delivered_neg.get_or_insert(t),
                };
                self.log(EventKind::EndpointHit, robot, None);
                if self.variant == Variant::Broadcast && !self.finished() {
                    let h = self.agents[robot].heading;
                    self.set_heading(robot, -h);
                    self.log(EventKind::Turnaround, robot, None);
                }
            }
        }
    }
}

/// The event robot `i` heads for on its own: reaching the source or an
/// endpoint.
fn solo_event(state: &SimState, i: usize) -> Option<Event> {
    let a = &state.agents[i];
    let now = state.clock;
    if a.has_msg {
        if a.heading == 0 {
            return None;
        }
        let target = if state.variant == Variant::PonyExpress { 1.0 } else { a.heading as f64 };
        let dt = ((target - a.x) / a.velocity()).max(0.0);
        Some(Event::EndpointHit { t: now + dt, robot: i, side: Side::of(target) })
    } else {
        let toward = -a.x * a.heading as f64;
        (toward >= 0.0 || a.x.abs() <= TIE)
            .then(|| Event::SourcePickup { t: now + (a.x.abs() / a.v), robot: i })
    }
}

/// When carrier `i` and message-less `j` next coincide, on current headings.
fn meeting_event(state: &SimState, i: usize, j: usize) -> Option<Event> {
    let (c, o) = (&state.agents[i], &state.agents[j]);
    let gap = o.x - c.x;
    let dt = if gap.abs() <= TIE {
        0.0
    } else {
        let closing = c.velocity() - o.velocity();
        if closing == 0.0 {
            return None;
        }
        let dt = gap / closing;
        if dt < -TIE {
            return None;
        }
        dt.max(0.0)
    };
    Some(Event::Meeting { t: state.clock + dt, carrier: i, other: j })
}

/// Among `found`, the earliest event after tie-breaking.
fn pick(state: &SimState, found: Vec<Event>) -> (Option<Event>, Vec<Event>) {
    let agents = &state.agents;
    let t_min = found.iter().map(Event::time).fold(f64::INFINITY, f64::min);
    let id = |e: &Event| match *e {
        Event::SourcePickup { robot, .. } | Event::EndpointHit { robot, .. } => agents[robot].id,
        Event::Meeting { carrier, other, .. } => agents[carrier].id.min(agents[other].id),
    };
    let best = found
        .iter()
        .filter(|e| e.time() <= t_min + TIE)
        .min_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| id(a).cmp(&id(b))))
        .copied();
    let rest = found.into_iter().filter(|e| Some(*e) != best).collect();
    (best, rest)
}

/// Earliest pending event, or `None` when nothing will ever happen.
///
/// Ties within `1e-12` go to pickups, then meetings, then endpoint hits,
/// then to the lower robot id. This rescans every robot and pair; the
/// simulation itself keeps a queue and only rescans robots that changed.
pub fn next_event(state: &SimState) -> Option<Event> {
    let agents = &state.agents;
    let mut found: Vec<Event> = (0..agents.len()).filter_map(|i| solo_event(state, i)).collect();
    for (i, c) in agents.iter().enumerate().filter(|(_, a)| a.has_msg) {
        for (j, o) in agents.iter().enumerate().filter(|(_, a)| !a.has_msg) {
            if state.seen_meetings.contains(&(i, j, c.version, o.version)) {
                continue;
            }
            found.extend(meeting_event(state, i, j));
        }
    }
    pick(state, found).0
}

/// Queued event, valid while the robots involved keep their versions.
struct Pending {
    ev: Event,
    stamp: (u32, u32),
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl Ord for Pending {
    // min-heap on time
    fn cmp(&self, other: &Self) -> Ordering {
        other.ev.time().total_cmp(&self.ev.time())
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Scheduler {
    heap: BinaryHeap<Pending>,
}

impl Scheduler {
    fn new(state: &SimState) -> Self {
        let mut s = Self { heap: BinaryHeap::new() };
        for i in 0..state.agents.len() {
            s.touch(state, i);
        }
        s
    }

    fn stamp(state: &SimState, ev: &Event) -> (u32, u32) {
        let v = |i: usize| state.agents[i].version;
        match *ev {
            Event::SourcePickup { robot, .. } | Event::EndpointHit { robot, .. } => (v(robot), 0),
            Event::Meeting { carrier, other, .. } => (v(carrier), v(other)),
        }
    }

    fn push(&mut self, state: &SimState, ev: Event) {
        self.heap.push(Pending { stamp: Self::stamp(state, &ev), ev });
    }

    /// Queues everything robot `i` can take part in from its current state.
    fn touch(&mut self, state: &SimState, i: usize) {
        if let Some(ev) = solo_event(state, i) {
            self.push(state, ev);
        }
        let holds = state.agents[i].has_msg;
        for j in (0..state.agents.len()).filter(|&j| state.agents[j].has_msg != holds) {
            let (c, o) = if holds { (i, j) } else { (j, i) };
            if let Some(ev) = meeting_event(state, c, o) {
                self.push(state, ev);
            }
        }
    }

    fn pop_valid(&mut self, state: &SimState) -> Option<Event> {
        while let Some(p) = self.heap.pop() {
            if Self::stamp(state, &p.ev) == p.stamp {
                return Some(p.ev);
            }
        }
        None
    }

    fn next(&mut self, state: &SimState) -> Option<Event> {
        let first = self.pop_valid(state)?;
        let mut found = vec![first];
        while self.heap.peek().is_some_and(|p| p.ev.time() <= first.time() + TIE) {
            found.extend(self.pop_valid(state));
        }
        let (best, rest) = pick(state, found);
        for ev in rest {
            self.push(state, ev);
        }
        best
    }
}

/// Runs the variant's online protocol to completion.
pub fn simulate(instance: &ValidatedInstance) -> Result<SimResult> {
    let horizon = (3.0 + instance.max_abs_position()) / instance.min_speed();
    let mut state = SimState::new(instance);
    let mut queue = Scheduler::new(&state);
    let mut versions = Vec::with_capacity(state.agents.len());
    while !state.finished() {
        let ev = queue.next(&state).ok_or(Error::SimulationHorizonExceeded { horizon })?;
        if ev.time() > horizon * (1.0 + 1e-12) {
            return Err(Error::SimulationHorizonExceeded { horizon });
        }
        versions.clear();
        versions.extend(state.agents.iter().map(|a| a.version));
        state.apply(ev);
        for (i, &before) in versions.iter().enumerate() {
            if state.agents[i].version != before {
                queue.touch(&state, i);
            }
        }
    }
    let end = state.clock;
    let trajectories = state
        .agents
        .iter()
        .map(|a| {
            let mut points = a.points.clone();
            if points.last().is_none_or(|&(t, _)| t < end) {
                points.push((end, a.x));
            }
            Trajectory { id: a.id, v: a.v, points, acquired: a.acquired }
        })
        .collect();
    let objective = match instance.variant {
        Variant::Broadcast => state.delivered_pos.unwrap().max(state.delivered_neg.unwrap()),
        _ => state.delivered_pos.or(state.delivered_neg).unwrap(),
    };
    Ok(SimResult {
        variant: instance.variant,
        objective,
        time_pos: state.delivered_pos,
        time_neg: state.delivered_neg,
        events: state.events,
        trace: state.trace,
        trajectories,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_bc_adversary, gen_hb_adversary};
    use crate::model::ProblemInstance;

    fn inst(variant: Variant, pairs: &[(f64, f64)]) -> ValidatedInstance {
        ProblemInstance::from_pairs(variant, pairs).validate().unwrap()
    }

    #[test]
    fn pony_relay() {
        let res = simulate(&inst(Variant::PonyExpress, &[(0.2, 1.0), (0.9, 2.0)])).unwrap();
        assert!((res.objective - 47.0 / 60.0).abs() < 1e-12);
        let kinds: Vec<_> = res.events.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, vec![EventKind::SourcePickup, EventKind::Handover, EventKind::EndpointHit]);
    }

    #[test]
    fn hb_adversary_takes_two() {
        let res = simulate(&gen_hb_adversary()).unwrap();
        assert!((res.objective - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bc_adversary_takes_three() {
        let res = simulate(&gen_bc_adversary(0.0).unwrap()).unwrap();
        assert!((res.objective - 3.0).abs() < 1e-12);
        assert_eq!(res.time_pos, Some(1.0));
        assert!(res.events.iter().any(|e| e.kind == EventKind::Turnaround));
    }

    #[test]
    fn first_event_is_pickup() {
        let state = SimState::new(&inst(Variant::PonyExpress, &[(0.5, 1.0)]));
        match next_event(&state).unwrap() {
            Event::SourcePickup { t, robot } => {
                assert_eq!(robot, 0);
                assert!((t - 0.5).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn symmetric_closing_meeting() {
        let mut state = SimState::new(&inst(Variant::PonyExpress, &[(0.0, 1.0), (1.0, 1.0)]));
        let ev = next_event(&state).unwrap();
        state.apply(ev);
        match next_event(&state).unwrap() {
            Event::Meeting { t, .. } => assert!((t - 0.5).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pickup_beats_meeting_on_tie() {
        // robot 1 reaches the source exactly when the carrier would meet it there
        let mut state = SimState::new(&inst(Variant::PonyExpress, &[(0.0, 1.0), (0.5, 1.0)]));
        state.apply(next_event(&state).unwrap());
        state.agents[0].heading = 0; // carrier parked at the source
        state.agents[0].version += 1;
        assert!(matches!(next_event(&state), Some(Event::SourcePickup { robot: 1, .. })));
    }

    #[test]
    fn queue_matches_full_rescan() {
        for variant in Variant::ALL {
            for seed in 0..300 {
                let inst = crate::gen_random(variant, 1 + seed as usize % 12, seed, (0.1, 2.0)).unwrap();
                let mut state = SimState::new(&inst);
                while !state.finished() {
                    let ev = next_event(&state).unwrap();
                    state.apply(ev);
                }
                let fast = simulate(&inst).unwrap();
                assert_eq!(fast.events.len(), state.events.len(), "{variant} seed {seed}");
                for (a, b) in fast.events.iter().zip(&state.events) {
                    assert_eq!((a.kind, a.robot, a.other), (b.kind, b.robot, b.other));
                    assert!((a.t - b.t).abs() < 1e-9 && (a.x - b.x).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn trajectories_are_lipschitz() {
        let res = simulate(&gen_bc_adversary(0.3).unwrap()).unwrap();
        for tr in &res.trajectories {
            for w in tr.points.windows(2) {
                let (dt, dx) = (w[1].0 - w[0].0, (w[1].1 - w[0].1).abs());
                assert!((dx - tr.v * dt).abs() < 1e-9, "{tr:?}");
            }
        }
    }
}
