//! Competitive-ratio experiments.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate::{gen_bc_adversary, gen_random, trial_seed};
use crate::io::serialize;
use crate::model::{ValidatedInstance, Variant, EPS};
use crate::online::simulate;

/// Accuracy of the Broadcast reference optimum used for ratios.
pub const OFFLINE_EPS: f64 = 1e-9;

/// Online time over offline optimum.
pub fn competitive_ratio(instance: &ValidatedInstance) -> Result<f64> {
    let (online, offline) = online_offline(instance)?;
    Ok(online / offline)
}

fn online_offline(instance: &ValidatedInstance) -> Result<(f64, f64)> {
    let online = simulate(instance)?.objective;
    let offline = crate::solve(instance, OFFLINE_EPS)?.objective;
    Ok((online, offline))
}

/// Proven worst-case ratio of the online protocol and the slack allowed.
pub fn ratio_bound(variant: Variant) -> (f64, f64) {
    match variant {
        Variant::PonyExpress => (1.0, EPS),
        Variant::HalfBroadcast => (1.5, 1e-6),
        Variant::Broadcast => (1.8, 1e-5),
    }
}

/// Stable short fingerprint of an instance.
pub fn digest(instance: &ValidatedInstance) -> String {
    let mut h = DefaultHasher::new();
    serialize(instance).hash(&mut h);
    format!("{:016x}", h.finish())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub index: u64,
    pub digest: String,
    pub n: usize,
    pub online: f64,
    pub offline: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub variant: Variant,
    pub trials: u64,
    pub seed: u64,
    pub bound: f64,
    pub tolerance: f64,
    pub max_ratio: f64,
    /// Indices of rows above `bound + tolerance` or below `1 - 1e-9`.
    pub violations: Vec<u64>,
    pub rows: Vec<RatioRow>,
}

/// Ratios over `trials` seeded random instances.
///
/// Trial `i` has `1 + i % n` robots, so every size up to `n` is covered.
pub fn sweep(
    variant: Variant,
    n: usize,
    trials: u64,
    seed: u64,
    speed_range: (f64, f64),
) -> Result<RatioReport> {
    if trials == 0 || n == 0 {
        return Err(Error::InvalidRange("trials and n must be at least 1".into()));
    }
    let mut rows = (0..trials)
        .into_par_iter()
        .map(|i| {
            let size = 1 + (i % n as u64) as usize;
            let inst = gen_random(variant, size, trial_seed(seed, i), speed_range)?;
            let (online, offline) = online_offline(&inst)?;
            Ok(RatioRow { index: i, digest: digest(&inst), n: size, online, offline, ratio: online / offline })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.index);
    let (bound, tolerance) = ratio_bound(variant);
    let max_ratio = rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    let violations = rows
        .iter()
        .filter(|r| !(r.ratio <= bound + tolerance && r.ratio >= 1.0 - EPS))
        .map(|r| r.index)
        .collect();
    Ok(RatioReport { variant, trials, seed, bound, tolerance, max_ratio, violations, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LbRow {
    pub y: f64,
    /// Time the adaptive adversary forces on any online algorithm, `3 + 2y`.
    pub online: f64,
    /// What the simulated protocol actually takes on the static instance.
    pub protocol: f64,
    pub offline: f64,
    pub ratio: f64,
    /// `(3 + 2y)(3 - y)/(5 + y)`.
    pub expected_ratio: f64,
}

/// The Broadcast lower-bound family on `samples` evenly spaced `y` in `[0, 1/2]`.
pub fn lb_family_sweep(samples: usize) -> Result<Vec<LbRow>> {
    if samples < 2 {
        return Err(Error::InvalidRange("need at least 2 samples".into()));
    }
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let y = 0.5 * i as f64 / (samples - 1) as f64;
            let inst = gen_bc_adversary(y)?;
            let online = 3.0 + 2.0 * y;
            let protocol = simulate(&inst)?.objective;
            let offline = crate::broadcast::solve_broadcast(&inst, OFFLINE_EPS)?.objective;
            Ok(LbRow {
                y,
                online,
                protocol,
                offline,
                ratio: online / offline,
                expected_ratio: (3.0 + 2.0 * y) * (3.0 - y) / (5.0 + y),
            })
        })
        .collect()
}
