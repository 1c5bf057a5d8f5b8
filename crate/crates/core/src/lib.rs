//! Simulation of Local SGD on strongly convex objectives.
//!
//! `n` workers run SGD with step size `eta_t = 2 / (mu (t + beta))` and
//! average their parameters at the times listed in a [`Schedule`]. The
//! crate provides the schedule constructors (synchronous, one-shot,
//! fixed-interval and linearly growing intervals), two objectives with
//! strong-growth gradient noise, a deterministic multi-trial engine, and
//! the matching closed-form error bounds.
//!
//! Trials run on rayon when the `parallel` feature (on by default) is
//! enabled; results are bit-identical to sequential execution.

pub mod bounds;
pub mod engine;
mod error;
pub mod objectives;
mod params;
pub mod rng;
mod schedule;
pub mod schedules;

pub use engine::{AggregateTrace, LocalSgd, Trace, WorkerState};
pub use error::{Error, Result};
pub use objectives::{Dataset, LogisticL2, Objective, QuadraticStrongGrowth};
pub use params::{NoiseParams, ProblemParams};
pub use schedule::Schedule;
