//! Closed-form upper bounds on `E[F(x_bar^T)] - F*` for Local SGD with
//! `eta_t = 2 / (mu (t + beta))`.
//!
//! The evaluators return the formula value verbatim, even when it exceeds
//! the initial suboptimality or when the schedule is not admissible;
//! [`BoundReport`] tells the two cases apart.

use crate::error::{invalid, Error, Result};
use crate::params::{NoiseParams, ProblemParams};
use crate::schedule::Schedule;
use crate::schedules::{self, Admissibility};

/// `sum_{t=0}^{T-1} (t - tau(t)) / (t + beta)`.
pub fn lag_sum(schedule: &Schedule, beta: f64) -> f64 {
    let mut total = 0.0;
    let mut last = 0;
    let mut next = schedule.comm_times().iter().peekable();
    for t in 0..schedule.horizon() {
        if next.next_if_eq(&&t).is_some() {
            last = t;
        }
        total += (t - last) as f64 / (t as f64 + beta);
    }
    total
}

/// First two terms shared by every bound:
/// `beta^2 xi0 / T^2 + 2 L sigma^2 / (n mu^2 T)`.
fn base_terms(xi0: f64, params: &ProblemParams, noise: &NoiseParams) -> f64 {
    let t = params.horizon() as f64;
    let beta = params.beta();
    let mu = params.mu();
    let l = params.smoothness();
    let n = params.workers() as f64;
    beta * beta * xi0 / (t * t) + 2.0 * l * noise.sigma2() / (n * mu * mu * t)
}

/// `9 L^2 sigma^2 / (mu^3 T^2)`, the coefficient of the lag term.
fn lag_coefficient(params: &ProblemParams, noise: &NoiseParams) -> f64 {
    let t = params.horizon() as f64;
    let mu = params.mu();
    let l = params.smoothness();
    9.0 * l * l * noise.sigma2() / (mu * mu * mu * t * t)
}

/// Bound for an arbitrary admissible schedule:
/// `beta^2 xi0/T^2 + 2 L sigma^2/(n mu^2 T) + 9 L^2 sigma^2/(mu^3 T^2) * lag_sum`.
pub fn bound_general(
    xi0: f64,
    schedule: &Schedule,
    params: &ProblemParams,
    noise: &NoiseParams,
) -> f64 {
    base_terms(xi0, params, noise)
        + lag_coefficient(params, noise) * lag_sum(schedule, params.beta())
}

/// Bound for intervals of length at most `H`, using
/// `lag_sum <= (H - 1) ln(1 + T / (beta - 1))`. Requires `beta > 1`.
pub fn bound_fixed(
    xi0: f64,
    interval: usize,
    params: &ProblemParams,
    noise: &NoiseParams,
) -> Result<f64> {
    if interval == 0 {
        return Err(invalid("H", "interval must be at least 1"));
    }
    let beta = params.beta();
    if beta <= 1.0 {
        return Err(invalid(
            "beta",
            format!("fixed-interval bound needs beta > 1, got {beta}"),
        ));
    }
    let t = params.horizon() as f64;
    let lag = (interval - 1) as f64 * (t / (beta - 1.0)).ln_1p();
    Ok(base_terms(xi0, params, noise) + lag_coefficient(params, noise) * lag)
}

/// Bound for the growing schedule with `R` rounds:
/// `beta^2 xi0/T^2 + 2 L sigma^2/(n mu^2 T) + 72 L^2 sigma^2/(mu^3 T R)`.
pub fn bound_growing(
    xi0: f64,
    rounds: usize,
    params: &ProblemParams,
    noise: &NoiseParams,
) -> Result<f64> {
    let horizon = params.horizon();
    if rounds == 0 || rounds * rounds > 2 * horizon {
        return Err(invalid(
            "R",
            format!("rounds must satisfy 1 <= R <= sqrt(2T), got {rounds} for T = {horizon}"),
        ));
    }
    let t = horizon as f64;
    let mu = params.mu();
    let l = params.smoothness();
    let tail = 72.0 * l * l * noise.sigma2() / (mu * mu * mu * t * rounds as f64);
    Ok(base_terms(xi0, params, noise) + tail)
}

/// `Phi(a, b) = prod_{i=a}^{b} (1 - 2/i)` together with its upper bound
/// `(a / (b + 1))^2`.
pub fn phi_bound_check(a: u64, b: u64) -> Result<(f64, f64)> {
    if a <= 2 || b < a {
        return Err(Error::InvalidParam {
            name: "a, b",
            reason: format!("need b >= a > 2, got a = {a}, b = {b}"),
        });
    }
    let product = (a..=b).map(|i| 1.0 - 2.0 / i as f64).product();
    let bound = (a as f64 / (b + 1) as f64).powi(2);
    Ok((product, bound))
}

/// How a schedule was built, for picking the specialized bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Synchronous,
    OneShot,
    Fixed { interval: usize },
    Growing { rounds: usize },
    Custom,
}

/// Every applicable bound for one configuration, plus admissibility.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub admissibility: Admissibility,
    pub min_beta: f64,
    pub lag_sum: f64,
    pub general: f64,
    pub fixed: Option<f64>,
    pub growing: Option<f64>,
}

impl BoundReport {
    pub fn new(
        xi0: f64,
        schedule: &Schedule,
        kind: ScheduleKind,
        params: &ProblemParams,
        noise: &NoiseParams,
    ) -> Self {
        let rounds = match kind {
            ScheduleKind::Growing { rounds } => Some(rounds),
            _ => None,
        };
        let fixed = match kind {
            ScheduleKind::Synchronous => Some(1),
            ScheduleKind::OneShot => Some(schedule.horizon()),
            ScheduleKind::Fixed { interval } => Some(interval),
            _ => None,
        }
        .and_then(|h| bound_fixed(xi0, h, params, noise).ok());
        Self {
            admissibility: schedules::validate(schedule, params, noise),
            min_beta: schedules::min_beta_for(params, noise, rounds),
            lag_sum: lag_sum(schedule, params.beta()),
            general: bound_general(xi0, schedule, params, noise),
            fixed,
            growing: rounds.and_then(|r| bound_growing(xi0, r, params, noise).ok()),
        }
    }
}
