//! Generalised Pony Express: movable source, late message, late robots.
//!
//! Coordinates are local to the source: robot `q` is its distance from the
//! source toward the destination. A robot appears at `q` at its release
//! time, walks to the source and waits there until it can take the message.
//! Handover still needs a strictly faster receiver.
//!
//! The solver is a label-setting greedy in the spirit of Dijkstra: the robot
//! with the earliest acquisition time is final, and it can only improve
//! faster robots it catches on the way out. `O(n^2)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{HandoverEvent, Participant, RobotId, Side, EPS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GpeRobot {
    pub id: RobotId,
    /// Distance from the source, `>= 0`.
    pub q: f64,
    pub v: f64,
    pub release: f64,
}

impl GpeRobot {
    pub fn new(id: RobotId, q: f64, v: f64, release: f64) -> Self {
        Self { id, q, v, release }
    }

    /// Position at time `t >= release` while still walking to the source.
    fn inbound(&self, t: f64) -> f64 {
        (self.q - self.v * (t - self.release)).max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GpeInstance {
    pub source_pos: f64,
    /// Earliest time the message is available at the source.
    pub source_time: f64,
    pub dest_pos: f64,
    pub robots: Vec<GpeRobot>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GpeSolution {
    pub objective: f64,
    /// Global coordinates; the first giver is [`Participant::Source`] and the
    /// last receiver is [`Participant::Endpoint`]`(Pos)`.
    pub chain: Vec<HandoverEvent>,
}

impl GpeInstance {
    fn check(&self) -> Result<()> {
        let finite = self.source_pos.is_finite() && self.dest_pos.is_finite();
        if !finite || self.dest_pos <= self.source_pos {
            return Err(Error::InvalidGeometry(format!(
                "destination {} must lie beyond source {}",
                self.dest_pos, self.source_pos
            )));
        }
        if !(self.source_time >= 0.0 && self.source_time.is_finite()) {
            return Err(Error::InvalidGeometry(format!("source time {}", self.source_time)));
        }
        for r in &self.robots {
            if !(r.v > 0.0 && r.v.is_finite()) {
                return Err(Error::NonPositiveSpeed { id: r.id, v: r.v });
            }
            if !(r.q >= 0.0 && r.q.is_finite() && r.release >= 0.0 && r.release.is_finite()) {
                return Err(Error::InvalidGeometry(format!(
                    "robot {} has q = {}, release = {}",
                    r.id, r.q, r.release
                )));
            }
        }
        if self.robots.is_empty() {
            return Err(Error::NoDelivery);
        }
        Ok(())
    }
}

pub fn solve_gpe(g: &GpeInstance) -> Result<GpeSolution> {
    g.check()?;
    let d = g.dest_pos - g.source_pos;
    let rs = &g.robots;
    let n = rs.len();
    // earliest acquisition (time, local position, parent)
    let mut acq: Vec<f64> = rs.iter().map(|r| g.source_time.max(r.release + r.q / r.v)).collect();
    let mut at = vec![0.0_f64; n];
    let mut parent = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut best = f64::INFINITY;
    let mut best_via = usize::MAX;

    loop {
        let mut j = usize::MAX;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let better = j == usize::MAX
                || acq[k] < acq[j]
                || (acq[k] == acq[j] && (rs[k].v > rs[j].v || (rs[k].v == rs[j].v && rs[k].id < rs[j].id)));
            if better {
                j = k;
            }
        }
        if j == usize::MAX || acq[j] >= best {
            break;
        }
        done[j] = true;
        let (tj, xj, vj) = (acq[j], at[j], rs[j].v);
        let delivery = tj + (d - xj) / vj;
        if delivery < best {
            best = delivery;
            best_via = j;
        }
        for k in 0..n {
            let rk = &rs[k];
            if done[k] || rk.v <= vj {
                continue;
            }
            let t0 = tj.max(rk.release);
            let carrier_at = xj + vj * (t0 - tj);
            let y = rk.inbound(t0);
            if carrier_at > y + EPS {
                continue;
            }
            let t = if y <= 0.0 {
                t0
            } else {
                ((rk.q + rk.v * rk.release - xj + vj * tj) / (vj + rk.v)).max(t0)
            };
            let x = xj + vj * (t - tj);
            if x > d {
                continue;
            }
            if t < acq[k] {
                acq[k] = t;
                at[k] = x.max(0.0);
                parent[k] = j;
            }
        }
    }

    if best_via == usize::MAX {
        return Err(Error::NoDelivery);
    }
    let mut carriers = vec![best_via];
    while parent[*carriers.last().unwrap()] != usize::MAX {
        carriers.push(parent[*carriers.last().unwrap()]);
    }
    carriers.reverse();
    let mut chain = Vec::with_capacity(carriers.len() + 1);
    let mut giver = Participant::Source;
    for &k in &carriers {
        let receiver = Participant::Robot(rs[k].id);
        chain.push(HandoverEvent::new(acq[k], g.source_pos + at[k], giver, receiver));
        giver = receiver;
    }
    chain.push(HandoverEvent::new(best, g.dest_pos, giver, Participant::Endpoint(Side::Pos)));
    Ok(GpeSolution { objective: best, chain })
}
