//! Message relay by mobile robots on a segment.
//!
//! A message sits at `0`. Robots, each with a starting position and a speed,
//! pick it up face to face and relay it to the faster robots they meet. Three
//! goals are covered:
//!
//! * [`Variant::PonyExpress`] — deliver to `1` on `[0, 1]`;
//! * [`Variant::HalfBroadcast`] — deliver to either end of `[-1, 1]`;
//! * [`Variant::Broadcast`] — deliver to both ends of `[-1, 1]`.
//!
//! The crate ships exact offline solvers ([`solve_pony`],
//! [`solve_half_broadcast`]), an additive approximation scheme
//! ([`solve_broadcast`]), the online protocols ([`simulate`]), brute-force
//! [`oracle`]s and a competitive-ratio [`harness`].
//!
//! ```
//! use pony_core::{solve_pony, simulate, ProblemInstance, Variant};
//!
//! let inst = ProblemInstance::from_pairs(Variant::PonyExpress, &[(0.2, 1.0), (0.9, 2.0)])
//!     .validate()
//!     .unwrap();
//! let offline = solve_pony(&inst).unwrap().objective;
//! let online = simulate(&inst).unwrap().objective;
//! assert!((offline - 47.0 / 60.0).abs() < 1e-12);
//! assert!((online - offline).abs() < 1e-9);
//! ```

pub mod broadcast;
pub mod error;
pub mod generate;
pub mod gpe;
pub mod half_broadcast;
pub mod harness;
pub mod io;
pub mod model;
pub mod online;
pub mod oracle;
pub mod pony;
pub mod search;
pub mod trace;

pub use broadcast::{eval_split, feasible_m_interval, no_crossing_time, solve_broadcast, Receiver};
pub use error::{Error, Result};
pub use generate::{gen_bc_adversary, gen_hb_adversary, gen_random, trial_seed};
pub use gpe::{solve_gpe, GpeInstance, GpeRobot, GpeSolution};
pub use half_broadcast::{direction_time, solve_half_broadcast};
pub use harness::{competitive_ratio, lb_family_sweep, sweep, RatioReport};
pub use model::{
    HandoverEvent, Participant, ProblemInstance, Robot, RobotId, Side, SolveResult, SplitPlan,
    ValidatedInstance, Variant, EPS,
};
pub use online::{simulate, EventKind, SimEvent, SimResult};
pub use pony::{meet_time_carrier, meet_time_converging, solve_pony};
pub use search::unimodal_min;

/// Offline optimum for any variant, dispatching on the instance tag.
///
/// `eps` only matters for [`Variant::Broadcast`].
pub fn solve(instance: &ValidatedInstance, eps: f64) -> Result<SolveResult> {
    match instance.variant {
        Variant::PonyExpress => solve_pony(instance),
        Variant::HalfBroadcast => solve_half_broadcast(instance),
        Variant::Broadcast => solve_broadcast(instance, eps),
    }
}
