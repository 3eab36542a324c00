//! Offline Pony Express: a priority-queue sweep over neighbouring robots.
//!
//! Every robot walks toward the source until it holds the message. The list
//! of robots still relevant is kept in position order behind the carrier;
//! the only interactions that can happen next are between list neighbours:
//!
//! * the carrier meets its right neighbour (handover if the neighbour is
//!   strictly faster, otherwise the neighbour is useless and dropped);
//! * a non-carrier overtakes its slower left neighbour, which then becomes
//!   useless as well;
//! * the carrier reaches the destination.
//!
//! Each event removes one node, so the sweep performs `O(n)` heap operations.
//! Robots shadowed by a faster robot closer to the source are filtered out
//! up front, which on random inputs leaves only a handful of nodes.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::model::{
    robot_order, HandoverEvent, Participant, Robot, Side, SolveResult, ValidatedInstance, Variant,
};

/// First time `t >= 0` at which `a` and `b` coincide, given their headings.
///
/// `a` must start left of (or at) `b`. Returns `+inf` when they never meet.
pub fn meet_time_converging(a: &Robot, a_heading: Side, b: &Robot, b_heading: Side) -> f64 {
    let gap = b.p - a.p;
    if gap <= 0.0 {
        return 0.0;
    }
    let closing = a_heading.sign() * a.v - b_heading.sign() * b.v;
    if closing <= 0.0 {
        f64::INFINITY
    } else {
        gap / closing
    }
}

/// When a carrier meets the robot `next` walking toward the source.
///
/// The carrier started at `carrier.p`, acquired the message at time `pickup`
/// (either at the source, or from a slower robot on its way there) and has
/// moved right at full speed since.
pub fn meet_time_carrier(carrier: &Robot, pickup: f64, next: &Robot) -> f64 {
    (next.p - carrier.p + 2.0 * pickup * carrier.v) / (carrier.v + next.v)
}

/// Optimal delivery time to `1` and its relay chain.
pub fn solve_pony(instance: &ValidatedInstance) -> Result<SolveResult> {
    if instance.variant != Variant::PonyExpress {
        return Err(Error::VariantMismatch { expected: "pony", found: instance.variant });
    }
    // validated robots are already in sweep order
    let (objective, chain) = Sweep::new(&speed_records(instance.robots.iter())).run()?;
    Ok(SolveResult {
        variant: Variant::PonyExpress,
        objective,
        time_pos: Some(objective),
        time_neg: None,
        direction: None,
        chains: vec![chain],
        split: None,
    })
}

/// Sweep over an arbitrary set of robots at non-negative positions.
///
/// Used directly by the two-sided solvers on reflected subsets; the robots
/// need not be sorted.
pub fn solve_pony_robots(robots: &[Robot]) -> Result<(f64, Vec<HandoverEvent>)> {
    if robots.is_empty() {
        return Err(Error::NoDelivery);
    }
    let records = if robots.windows(2).all(|w| robot_order(&w[0], &w[1]) != Ordering::Greater) {
        speed_records(robots.iter())
    } else {
        let mut sorted = robots.to_vec();
        sorted.sort_by(robot_order);
        speed_records(sorted.iter())
    };
    Sweep::new(&records).run()
}

/// Robots strictly faster than everyone closer to the source.
///
/// Any other robot is shadowed: a robot at least as fast is met by the
/// carrier first, so either it takes the message or both are too slow.
fn speed_records<'a>(sorted: impl Iterator<Item = &'a Robot>) -> Vec<Robot> {
    let mut fastest = 0.0;
    sorted
        .filter(|r| {
            let keep = r.v > fastest;
            fastest = fastest.max(r.v);
            keep
        })
        .copied()
        .collect()
}

const NIL: u32 = u32::MAX;

// Kept to 32 bytes: the sweep is bound by cache misses on large inputs.
struct Node {
    p: f64,
    v: f64,
    /// Carrier line is `x = v*t - b`; only meaningful for the carrier.
    b: f64,
    left: u32,
    right: u32,
}

#[derive(PartialEq)]
struct Entry {
    t: f64,
    idx: u32,
    version: u32,
}

impl Eq for Entry {}

impl Ord for Entry {
    // min-heap on (t, idx)
    fn cmp(&self, other: &Self) -> Ordering {
        other.t.total_cmp(&self.t).then_with(|| other.idx.cmp(&self.idx))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Linked list `source, robots..., destination`. The carrier is always the
/// head of the list: everything left of it has been unlinked.
struct Sweep<'a> {
    robots: &'a [Robot],
    nodes: Vec<Node>,
    versions: Vec<u32>,
    heap: BinaryHeap<Entry>,
    carrier: u32,
    now: f64,
    chain: Vec<HandoverEvent>,
}

impl<'a> Sweep<'a> {
    fn new(robots: &'a [Robot]) -> Self {
        let len = robots.len() + 2;
        let link = |i: usize| Node {
            p: 0.0,
            v: 0.0,
            b: 0.0,
            left: if i == 0 { NIL } else { i as u32 - 1 },
            right: if i + 1 == len { NIL } else { i as u32 + 1 },
        };
        let mut nodes = Vec::with_capacity(len);
        nodes.push(link(0));
        for (i, r) in robots.iter().enumerate() {
            nodes.push(Node { p: r.p, v: r.v, ..link(i + 1) });
        }
        nodes.push(Node { p: 1.0, ..link(len - 1) });
        Self {
            robots,
            nodes,
            versions: vec![0; len],
            heap: BinaryHeap::new(),
            carrier: 0,
            now: 0.0,
            chain: Vec::new(),
        }
    }

    fn dest(&self) -> u32 {
        self.nodes.len() as u32 - 1
    }

    fn participant(&self, i: u32) -> Participant {
        if i == 0 {
            Participant::Source
        } else if i == self.dest() {
            Participant::Endpoint(Side::Pos)
        } else {
            Participant::Robot(self.robots[i as usize - 1].id)
        }
    }

    /// Time node `i` meets its current left neighbour.
    fn meet_time(&self, i: u32) -> f64 {
        let l = self.nodes[i as usize].left;
        if l == NIL {
            return f64::INFINITY;
        }
        let (a, b) = (&self.nodes[l as usize], &self.nodes[i as usize]);
        let t = if i == self.dest() {
            if l == self.carrier && a.v > 0.0 {
                (1.0 + a.b) / a.v
            } else {
                f64::INFINITY
            }
        } else if l == self.carrier {
            (b.p + a.b) / (b.v + a.v)
        } else if b.v > a.v {
            (b.p - a.p) / (b.v - a.v)
        } else {
            f64::INFINITY
        };
        t.max(self.now)
    }

    fn schedule(&mut self, i: u32) {
        if i == NIL {
            return;
        }
        self.versions[i as usize] += 1;
        let t = self.meet_time(i);
        // never-meeting nodes stay out of the heap until a neighbour changes
        if t.is_finite() {
            self.heap.push(Entry { t, idx: i, version: self.versions[i as usize] });
        }
    }

    fn unlink(&mut self, i: u32) {
        let Node { left: l, right: r, .. } = self.nodes[i as usize];
        if l != NIL {
            self.nodes[l as usize].right = r;
        }
        if r != NIL {
            self.nodes[r as usize].left = l;
        }
        self.versions[i as usize] += 1;
    }

    fn run(mut self) -> Result<(f64, Vec<HandoverEvent>)> {
        let initial: Vec<Entry> = (1..self.nodes.len() as u32)
            .filter_map(|i| {
                let t = self.meet_time(i);
                t.is_finite().then_some(Entry { t, idx: i, version: 0 })
            })
            .collect();
        self.heap = BinaryHeap::from(initial);
        while let Some(Entry { t, idx: i, version }) = self.heap.pop() {
            if self.versions[i as usize] != version {
                continue;
            }
            self.now = t;
            let Node { left: l, right, .. } = self.nodes[i as usize];
            if i == self.dest() {
                self.chain.push(HandoverEvent::new(t, 1.0, self.participant(l), self.participant(i)));
                return Ok((t, self.chain));
            }
            if l == self.carrier {
                let c = &self.nodes[l as usize];
                if self.nodes[i as usize].v > c.v {
                    let x = if l == 0 { 0.0 } else { c.v * t - c.b };
                    self.chain.push(HandoverEvent::new(t, x, self.participant(l), self.participant(i)));
                    self.unlink(l);
                    self.carrier = i;
                    let node = &mut self.nodes[i as usize];
                    node.b = 2.0 * node.v * t - node.p;
                } else {
                    self.unlink(i);
                }
                self.schedule(right);
            } else {
                // i overtakes a slower robot that can no longer matter
                self.unlink(l);
                self.schedule(i);
            }
        }
        Err(Error::NoDelivery)
    }
}
