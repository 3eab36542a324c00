//! Brute-force reference solvers for small instances.
//!
//! Nothing here reuses solver code. A relay schedule is a chain of robots;
//! every robot moves freely at up to its speed, a carrier heads straight for
//! the destination, and each link happens at the earliest moment the next
//! robot can stand where the carrier is. Chains are restricted to strictly
//! increasing speeds (a slower successor never helps) unless the exhaustive
//! switch asks for every ordering of every subset.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Robot, Side, ValidatedInstance, Variant, EPS};

pub const MAX_PONY: usize = 8;
pub const MAX_HB: usize = 6;
pub const MAX_BROADCAST: usize = 4;

/// A robot seen from a source at `0`, destination at `+dest`.
#[derive(Debug, Clone, Copy)]
struct Agent {
    /// Signed offset from the source.
    q: f64,
    v: f64,
    /// Time it may start moving.
    rel: f64,
}

/// Delivery time of one chain, or `None` if a link is impossible.
fn chain_time(chain: &[Agent], ts: f64, dest: f64) -> Option<f64> {
    let first = chain.first()?;
    let mut t = ts.max(first.rel + first.q.abs() / first.v);
    let mut x = 0.0;
    let mut v = first.v;
    for c in &chain[1..] {
        // need |q_c - (x + v (s - t))| <= v_c (s - rel_c) for s >= t0
        let t0 = t.max(c.rel);
        let ahead = (c.q - x + v * t + c.v * c.rel) / (v + c.v);
        let mut s = t0.max(ahead);
        let rhs = x - v * t - c.q + c.v * c.rel;
        if c.v > v {
            s = s.max(rhs / (c.v - v));
        } else if (c.v - v) * s < rhs - EPS {
            return None;
        }
        let meet = x + v * (s - t);
        if meet > dest + EPS {
            return None;
        }
        t = s;
        x = meet;
        v = c.v;
    }
    Some(t + (dest - x) / v)
}

/// Minimum over chains drawn from `agents`.
fn best_chain(agents: &[Agent], ts: f64, dest: f64, exhaustive: bool) -> f64 {
    let n = agents.len();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) {
        let mut set: Vec<Agent> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| agents[i]).collect();
        if exhaustive {
            for_each_permutation(&mut set, &mut |perm| {
                if let Some(t) = chain_time(perm, ts, dest) {
                    best = best.min(t);
                }
            });
        } else {
            set.sort_by(|a, b| a.v.total_cmp(&b.v));
            if set.windows(2).any(|w| w[0].v >= w[1].v) {
                continue;
            }
            if let Some(t) = chain_time(&set, ts, dest) {
                best = best.min(t);
            }
        }
    }
    best
}

fn for_each_permutation<T: Copy, F: FnMut(&[T])>(items: &mut [T], f: &mut F) {
    fn go<T: Copy, F: FnMut(&[T])>(items: &mut [T], k: usize, f: &mut F) {
        if k == items.len() {
            f(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            go(items, k + 1, f);
            items.swap(k, i);
        }
    }
    go(items, 0, f)
}

fn guard(instance: &ValidatedInstance, variant: Variant, max: usize) -> Result<()> {
    if instance.variant != variant {
        return Err(Error::VariantMismatch { expected: variant.as_str(), found: instance.variant });
    }
    if instance.robots.len() > max {
        return Err(Error::TooLarge { n: instance.robots.len(), max });
    }
    Ok(())
}

/// Optimal Pony Express time by chain enumeration.
pub fn brute_pony(instance: &ValidatedInstance) -> Result<f64> {
    brute_pony_with(instance, false)
}

/// `exhaustive` tries every ordering of every subset, not only chains of
/// increasing speed.
pub fn brute_pony_with(instance: &ValidatedInstance, exhaustive: bool) -> Result<f64> {
    guard(instance, Variant::PonyExpress, MAX_PONY)?;
    let agents: Vec<Agent> = instance.robots.iter().map(|r| Agent { q: r.p, v: r.v, rel: 0.0 }).collect();
    let t = best_chain(&agents, 0.0, 1.0, exhaustive);
    if t.is_finite() {
        Ok(t)
    } else {
        Err(Error::NoDelivery)
    }
}

/// Optimal Half-Broadcast time: every robot may join a chain toward either
/// endpoint, passing through the source if it starts on the other side.
pub fn brute_hb(instance: &ValidatedInstance) -> Result<f64> {
    guard(instance, Variant::HalfBroadcast, MAX_HB)?;
    let mut best = f64::INFINITY;
    for side in Side::BOTH {
        let agents: Vec<Agent> = instance
            .robots
            .iter()
            .map(|r| Agent { q: side.sign() * r.p, v: r.v, rel: 0.0 })
            .collect();
        best = best.min(best_chain(&agents, 0.0, 1.0, false));
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BruteBroadcast {
    pub value: f64,
    /// Widest grid spacing used; the value is exact up to this resolution
    /// times the local slope.
    pub grid_step: f64,
}

/// Handover points where `r` (at local offset `y`) can be when `l` arrives.
///
/// Solves `|y - m| <= v_r (d + m) / v_l` for `m` in `[0, 1]`.
fn reachable(d: f64, vl: f64, y: f64, vr: f64) -> Option<(f64, f64)> {
    let k = vr / vl;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    // left branch: y - m <= k (d + m)
    lo = lo.max((y - k * d) / (1.0 + k));
    // right branch: m - y <= k (d + m)  <=>  (1 - k) m <= y + k d
    let c = y + k * d;
    if k < 1.0 {
        hi = hi.min(c / (1.0 - k));
    } else if k > 1.0 {
        lo = lo.max(c / (1.0 - k));
    } else if c < 0.0 {
        return None;
    }
    (lo <= hi + EPS).then_some((lo, hi.max(lo)))
}

/// Broadcast time of one split, both halves by chain enumeration.
fn split_value(robots: &[Robot], li: usize, s: Side, m: f64) -> f64 {
    let l = robots[li];
    let sigma = s.sign();
    let t = (l.p.abs() + m) / l.v;
    let mut near = Vec::new();
    let mut far = vec![Agent { q: 0.0, v: l.v, rel: t + m / l.v }];
    for (i, r) in robots.iter().enumerate() {
        if i == li {
            continue;
        }
        if r.side() == s {
            near.push(Agent { q: sigma * r.p - m, v: r.v, rel: 0.0 });
        } else {
            far.push(Agent { q: r.p.abs(), v: r.v, rel: 0.0 });
        }
    }
    let here = if m >= 1.0 - 1e-15 {
        t
    } else {
        best_chain(&near, t, 1.0 - m, false)
    };
    here.max(best_chain(&far, 0.0, 1.0, false))
}

/// Broadcast optimum over no-crossing plans and single-crossing splits, the
/// handover point taken from a uniform grid of `grid` intervals and then
/// polished locally.
pub fn brute_broadcast(instance: &ValidatedInstance, grid: usize) -> Result<BruteBroadcast> {
    guard(instance, Variant::Broadcast, MAX_BROADCAST)?;
    if grid == 0 {
        return Err(Error::InvalidRange("grid must be positive".into()));
    }
    let robots = &instance.robots;
    let side_agents = |s: Side| -> Vec<Agent> {
        robots
            .iter()
            .filter(|r| r.side() == s)
            .map(|r| Agent { q: r.p.abs(), v: r.v, rel: 0.0 })
            .collect()
    };
    let mut best = best_chain(&side_agents(Side::Pos), 0.0, 1.0, false)
        .max(best_chain(&side_agents(Side::Neg), 0.0, 1.0, false));
    let mut step_max: f64 = 0.0;

    for (li, l) in robots.iter().enumerate() {
        for s in Side::BOTH {
            let mut ranges = vec![(1.0, 1.0)];
            for (ri, r) in robots.iter().enumerate() {
                if ri != li && r.side() == s {
                    ranges.extend(reachable(l.p.abs(), l.v, s.sign() * r.p, r.v));
                }
            }
            for (lo, hi) in ranges {
                let f = |m: f64| split_value(robots, li, s, m);
                if hi - lo <= 0.0 {
                    best = best.min(f(lo));
                    continue;
                }
                let step = (hi - lo) / grid as f64;
                step_max = step_max.max(step);
                let mut arg = lo;
                let mut val = f64::INFINITY;
                for i in 0..=grid {
                    let m = if i == grid { hi } else { lo + step * i as f64 };
                    let v = f(m);
                    if v < val {
                        val = v;
                        arg = m;
                    }
                }
                // golden-section polish inside the neighbouring cells
                let (mut a, mut b) = ((arg - step).max(lo), (arg + step).min(hi));
                let g = 0.5 * (5f64.sqrt() - 1.0);
                for _ in 0..60 {
                    let c = b - g * (b - a);
                    let d = a + g * (b - a);
                    let (fc, fd) = (f(c), f(d));
                    val = val.min(fc).min(fd);
                    if fc <= fd {
                        b = d;
                    } else {
                        a = c;
                    }
                }
                best = best.min(val);
            }
        }
    }
    Ok(BruteBroadcast { value: best, grid_step: step_max })
}

/// Two-robot Half-Broadcast optimum in closed form.
pub fn two_robot_hb(r: &Robot, r2: &Robot) -> f64 {
    let mut best = r.solo_time().min(r2.solo_time());
    for (a, b) in [(r, r2), (r2, r)] {
        if b.v <= a.v {
            continue;
        }
        let k = b.v / a.v;
        let d = a.p.abs();
        for side in Side::BOTH {
            let y = side.sign() * b.p;
            let m = if y >= 0.0 {
                ((y - k * d) / (1.0 + k)).max(0.0)
            } else {
                ((-y - k * d) / (k - 1.0)).max(0.0)
            };
            if m <= 1.0 {
                best = best.min((m + d) / a.v + (1.0 - m) / b.v);
            }
        }
    }
    best
}

/// Two-robot Broadcast optimum: best of going alone, splitting the
/// endpoints, or one robot handing over on the way and turning back.
pub fn two_robot_broadcast(r: &Robot, r2: &Robot) -> f64 {
    let solo = |x: &Robot| (x.p.abs() + 3.0) / x.v;
    let mut best = solo(r).min(solo(r2)).min(r.solo_time().max(r2.solo_time()));
    for (a, b) in [(r, r2), (r2, r)] {
        let d = a.p.abs();
        for side in Side::BOTH {
            let Some((lo, hi)) = reachable(d, a.v, side.sign() * b.p, b.v) else {
                continue;
            };
            // b finishes this side, a turns back for the other
            let f = |m: f64| ((d + m) / a.v + (1.0 - m) / b.v).max((d + 2.0 * m + 1.0) / a.v);
            let mut cands = vec![lo, hi];
            // the two lines cross where (1 - m)/v_b = (m + 1)/v_a
            let cross = (a.v - b.v) / (a.v + b.v);
            if cross > lo && cross < hi {
                cands.push(cross);
            }
            for m in cands {
                best = best.min(f(m));
            }
        }
    }
    best
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
    fn pony_examples() {
        let one = inst(Variant::PonyExpress, &[(0.5, 1.0)]);
        assert!((brute_pony(&one).unwrap() - 1.5).abs() < 1e-12);
        let two = inst(Variant::PonyExpress, &[(0.2, 1.0), (0.9, 2.0)]);
        assert!((brute_pony(&two).unwrap() - 47.0 / 60.0).abs() < 1e-12);
        assert!((brute_pony_with(&two, true).unwrap() - 47.0 / 60.0).abs() < 1e-12);
    }

    #[test]
    fn size_guards() {
        let pairs: Vec<_> = (0..9).map(|i| (i as f64 / 10.0, 1.0)).collect();
        assert!(matches!(brute_pony(&inst(Variant::PonyExpress, &pairs)), Err(Error::TooLarge { .. })));
        let pairs: Vec<_> = (0..5).map(|i| (i as f64 / 10.0, 1.0)).collect();
        let big = inst(Variant::Broadcast, &pairs);
        assert!(matches!(brute_broadcast(&big, 1000), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn hb_examples() {
        assert!((brute_hb(&gen_hb_adversary()).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        let one = inst(Variant::HalfBroadcast, &[(-0.3, 2.0)]);
        assert!((brute_hb(&one).unwrap() - 0.65).abs() < 1e-12);
        let rs = &gen_hb_adversary().robots;
        assert!((two_robot_hb(&rs[0], &rs[1]) - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn slow_partner_is_ignored() {
        let fast = Robot::new(0, 0.5, 1.0);
        let slow = Robot::new(1, -0.9, 1e-6);
        assert!((two_robot_hb(&fast, &slow) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn broadcast_examples() {
        let adv = gen_bc_adversary(0.0).unwrap();
        let b = brute_broadcast(&adv, 10_000).unwrap();
        assert!((b.value - 5.0 / 3.0).abs() < 1e-4);
        let rs = &adv.robots;
        assert!((two_robot_broadcast(&rs[0], &rs[1]) - 5.0 / 3.0).abs() < 1e-12);

        let lone = inst(Variant::Broadcast, &[(-0.5, 2.0)]);
        assert_eq!(brute_broadcast(&lone, 1000).unwrap().value, 1.75);
        let sym = inst(Variant::Broadcast, &[(-0.5, 1.0), (0.5, 1.0)]);
        assert!((brute_broadcast(&sym, 1000).unwrap().value - 1.5).abs() < 1e-12);
        let (a, b) = (Robot::new(0, -0.5, 1.0), Robot::new(1, 0.5, 1.0));
        assert!((two_robot_broadcast(&a, &b) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn reachable_matches_interval_example() {
        let (lo, hi) = reachable(0.5, 2.0, 0.5, 1.0).unwrap();
        assert!((lo - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(hi, 1.0);
    }
}
