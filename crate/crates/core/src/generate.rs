//! Seeded random instances and the adversarial lower-bound constructions.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{ProblemInstance, Robot, RobotId, ValidatedInstance, Variant};

/// Uniform random instance with `n` robots at pairwise distinct positions.
///
/// Output depends only on the arguments.
pub fn gen_random(
    variant: Variant,
    n: usize,
    seed: u64,
    speed_range: (f64, f64),
) -> Result<ValidatedInstance> {
    let (lo, hi) = speed_range;
    if n == 0 {
        return Err(Error::InvalidRange("robot count must be at least 1".into()));
    }
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
        return Err(Error::InvalidRange(format!(
            "speed range [{lo}, {hi}] must satisfy 0 < lo <= hi"
        )));
    }
    let (dlo, dhi) = variant.domain();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut robots = Vec::with_capacity(n);
    for id in 0..n {
        let p = loop {
            let p: f64 = rng.gen_range(dlo..=dhi) + 0.0;
            if seen.insert(p.to_bits()) {
                break p;
            }
        };
        let v = if lo == hi { lo } else { rng.gen_range(lo..=hi) };
        robots.push(Robot::new(id as RobotId, p, v));
    }
    ProblemInstance::new(variant, robots).validate()
}

/// Derives the seed of trial `index` from a sweep's master seed.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.gen()
}

/// Two-robot half-broadcast instance on which no online algorithm beats 3/2:
/// a slow robot at the source and a fast one at -1.
pub fn gen_hb_adversary() -> ValidatedInstance {
    ProblemInstance::new(
        Variant::HalfBroadcast,
        vec![Robot::new(0, 0.0, 0.5), Robot::new(1, -1.0, 1.0)],
    )
    .validate()
    .expect("fixed instance is valid")
}

/// Two-robot broadcast family indexed by `y` in `[0, 1/2]`: a unit-speed robot
/// at the source and a robot of speed `a = (1 - y)/2` at `y + a`.
pub fn gen_bc_adversary(y: f64) -> Result<ValidatedInstance> {
    if !(0.0..=0.5).contains(&y) {
        return Err(Error::YOutOfRange(y));
    }
    let a = (1.0 - y) / 2.0;
    ProblemInstance::new(
        Variant::Broadcast,
        vec![Robot::new(0, 0.0, 1.0), Robot::new(1, y + a, a)],
    )
    .validate()
}
