//! Communication schedule constructors, the per-interval admissibility
//! check and the smallest admissible step-size offset.

use crate::error::{invalid, Result};
use crate::params::{NoiseParams, ProblemParams};
use crate::schedule::Schedule;

/// Communicate after every step: `I = {1, ..., T}`.
pub fn synchronous(horizon: usize) -> Result<Schedule> {
    Schedule::new(horizon, (1..=horizon).collect())
}

/// Average once at the end: `I = {T}`.
pub fn one_shot(horizon: usize) -> Result<Schedule> {
    Schedule::new(horizon, vec![horizon])
}

/// Communicate every `interval` steps, plus a final round at `T` when
/// `interval` does not divide `T`.
pub fn fixed_interval(horizon: usize, interval: usize) -> Result<Schedule> {
    if interval == 0 || interval > horizon {
        return Err(invalid(
            "H",
            format!("interval must lie in [1, {horizon}], got {interval}"),
        ));
    }
    let mut times: Vec<usize> = (interval..=horizon).step_by(interval).collect();
    if times.last() != Some(&horizon) {
        times.push(horizon);
    }
    Schedule::new(horizon, times)
}

/// Interval growth factor `a = ceil(2T / R^2)`.
pub fn growth_factor(horizon: usize, rounds: usize) -> usize {
    (2 * horizon).div_ceil(rounds * rounds)
}

/// Linearly growing intervals `H_i = a (i + 1)` with `a = ceil(2T / R^2)`.
///
/// Communication times are `tau_j = a j (j + 1) / 2` truncated at `T`.
/// Rounds past the first one that reaches `T` are dropped, so the result
/// may have fewer than `rounds` entries.
pub fn growing(horizon: usize, rounds: usize) -> Result<Schedule> {
    check_rounds(horizon, rounds)?;
    growing_from(horizon, rounds, growth_factor(horizon, rounds))
}

/// [`growing`] with an explicit growth factor `a` in place of
/// `ceil(2T / R^2)`.
///
/// Fails if `a R (R + 1) / 2 < T`, since the schedule would then never
/// reach the horizon.
pub fn growing_with_factor(horizon: usize, rounds: usize, factor: usize) -> Result<Schedule> {
    check_rounds(horizon, rounds)?;
    if factor == 0 {
        return Err(invalid("a", "growth factor must be at least 1"));
    }
    let reach = factor * rounds * (rounds + 1) / 2;
    if reach < horizon {
        return Err(invalid(
            "a",
            format!("a = {factor} with R = {rounds} only reaches t = {reach} < T = {horizon}"),
        ));
    }
    growing_from(horizon, rounds, factor)
}

fn check_rounds(horizon: usize, rounds: usize) -> Result<()> {
    if horizon == 0 {
        return Err(invalid("T", "need at least one iteration"));
    }
    if rounds == 0 || rounds * rounds > 2 * horizon {
        return Err(invalid(
            "R",
            format!(
                "rounds must satisfy 1 <= R <= sqrt(2T) = {:.3}, got {rounds}",
                (2.0 * horizon as f64).sqrt()
            ),
        ));
    }
    Ok(())
}

fn growing_from(horizon: usize, rounds: usize, factor: usize) -> Result<Schedule> {
    let mut times = Vec::with_capacity(rounds);
    let mut tau = 0;
    for i in 0..rounds {
        tau = (tau + factor * (i + 1)).min(horizon);
        times.push(tau);
        if tau == horizon {
            break;
        }
    }
    Schedule::new(horizon, times)
}

/// Parses a comma-separated list of communication times.
pub fn custom(horizon: usize, list: &str) -> Result<Schedule> {
    let times = list
        .split(',')
        .map(|tok| {
            tok.trim().parse::<usize>().map_err(|_| {
                invalid(
                    "schedule",
                    format!("not a nonnegative integer: `{}`", tok.trim()),
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Schedule::new(horizon, times)
}

/// Admissibility of one inter-communication interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalCheck {
    pub index: usize,
    /// `tau_i`, the communication time opening the interval.
    pub start: usize,
    /// `H_i`.
    pub length: usize,
    /// `9 kappa^2 c ln(1 + (H_i - 1)/(tau_i + beta)) + 2 kappa (1 + c/n) - (tau_i + 1 + beta)`.
    pub lhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    /// `2 kappa^2`, the smallest admissible `beta`.
    pub beta_floor: f64,
    pub beta_ok: bool,
    pub intervals: Vec<IntervalCheck>,
}

impl Admissibility {
    pub fn admissible(&self) -> bool {
        self.beta_ok && self.intervals.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IntervalCheck> {
        self.intervals.iter().filter(|c| !c.pass)
    }
}

/// Evaluates the step-size/schedule compatibility condition on every
/// interval. Failures are reported, never raised.
pub fn validate(schedule: &Schedule, params: &ProblemParams, noise: &NoiseParams) -> Admissibility {
    let kappa = params.kappa();
    let beta = params.beta();
    let c = noise.c();
    let n = params.workers() as f64;
    let beta_floor = 2.0 * kappa * kappa;
    let drift = 2.0 * kappa * (1.0 + c / n);

    let intervals = schedule
        .intervals()
        .enumerate()
        .map(|(index, (start, length))| {
            let tau = start as f64;
            let growth = ((length as f64 - 1.0) / (tau + beta)).ln_1p();
            let lhs = 9.0 * kappa * kappa * c * growth + drift - (tau + 1.0 + beta);
            IntervalCheck {
                index,
                start,
                length,
                lhs,
                pass: lhs <= 0.0,
            }
        })
        .collect();

    Admissibility {
        beta_floor,
        beta_ok: beta >= beta_floor,
        intervals,
    }
}

/// Smallest `beta` that makes any schedule admissible.
///
/// Without `rounds` this is `max{9 kappa^2 c ln(1 + T/(2 kappa^2)) + 2 kappa (1 + c/n), 2 kappa^2}`,
/// valid for every schedule. With `rounds = Some(R)` it is the sharper
/// value for [`growing`]`(T, R)`:
/// `max{2 kappa^2, 9 kappa^2 c max{ln 3, ln(1 + T/(R^2 kappa^2))} + 2 kappa (1 + c/n)}`.
///
/// The result never drops below `1 + 1e-9`.
pub fn min_beta(
    kappa: f64,
    workers: usize,
    horizon: usize,
    noise: &NoiseParams,
    rounds: Option<usize>,
) -> f64 {
    let k2 = kappa * kappa;
    let c = noise.c();
    let t = horizon as f64;
    let drift = 2.0 * kappa * (1.0 + c / workers as f64);
    let log_term = match rounds {
        None => (t / (2.0 * k2)).ln_1p(),
        Some(r) => {
            let r = r as f64;
            3f64.ln().max((t / (r * r * k2)).ln_1p())
        }
    };
    let beta = (9.0 * k2 * c * log_term + drift).max(2.0 * k2);
    beta.max(1.0 + 1e-9)
}

/// [`min_beta`] using the constants held in `params` (its own `beta` is
/// ignored).
pub fn min_beta_for(params: &ProblemParams, noise: &NoiseParams, rounds: Option<usize>) -> f64 {
    min_beta(
        params.kappa(),
        params.workers(),
        params.horizon(),
        noise,
        rounds,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synchronous_and_one_shot() {
        assert_eq!(synchronous(3).unwrap().comm_times(), &[1, 2, 3]);
        assert_eq!(synchronous(1).unwrap().comm_times(), &[1]);
        assert_eq!(synchronous(1000).unwrap().rounds(), 1000);
        assert_eq!(one_shot(1000).unwrap().comm_times(), &[1000]);
        assert_eq!(one_shot(1).unwrap(), synchronous(1).unwrap());
        assert_eq!(one_shot(77).unwrap().interval_lengths(), vec![77]);
    }

    #[test]
    fn fixed_interval_examples() {
        assert_eq!(fixed_interval(10, 4).unwrap().comm_times(), &[4, 8, 10]);
        assert_eq!(fixed_interval(1000, 25).unwrap().rounds(), 40);
        let s = fixed_interval(500, 50).unwrap();
        assert_eq!(s.rounds(), 10);
        assert_eq!(
            s.comm_times(),
            (1..=10).map(|k| 50 * k).collect::<Vec<_>>().as_slice()
        );
        assert!(fixed_interval(10, 0).is_err());
        assert!(fixed_interval(10, 11).is_err());
    }

    #[test]
    fn growing_examples() {
        assert_eq!(growth_factor(1000, 26), 3);
        let s = growing(1000, 26).unwrap();
        assert_eq!(&s.comm_times()[..4], &[3, 9, 18, 30]);
        for (j, &tau) in s.comm_times().iter().enumerate().take(s.rounds() - 1) {
            let j = j + 1;
            assert_eq!(tau, 3 * j * (j + 1) / 2);
        }
        assert_eq!(*s.comm_times().last().unwrap(), 1000);
        assert_eq!(s.rounds(), 26);

        assert_eq!(growing(2, 2).unwrap().comm_times(), &[1, 2]);

        assert_eq!(growth_factor(500, 20), 3);
        let s = growing(500, 20).unwrap();
        let h = s.interval_lengths();
        for (i, &hi) in h.iter().enumerate().take(h.len() - 1) {
            assert_eq!(hi, 3 * (i + 1));
        }
    }

    #[test]
    fn growing_rejects_rounds_out_of_range() {
        assert!(growing(100, 0).is_err());
        assert!(growing(100, 15).is_err());
        assert!(growing(100, 14).is_ok());
    }

    #[test]
    fn growing_factor_override() {
        let s = growing_with_factor(500, 20, 5).unwrap();
        assert_eq!(&s.comm_times()[..3], &[5, 15, 30]);
        assert_eq!(s.rounds(), 14);
        assert!(growing_with_factor(500, 5, 1).is_err());
        assert!(growing_with_factor(500, 5, 0).is_err());
    }

    #[test]
    fn custom_list() {
        let s = custom(18, "3, 9,18").unwrap();
        assert_eq!(s.comm_times(), &[3, 9, 18]);
        assert!(custom(18, "3,x,18").is_err());
        assert!(custom(18, "3,9").is_err());
    }

    #[test]
    fn validate_first_interval_value() {
        let p = ProblemParams::new(1.0, 1.0, 20, 100, 2.0).unwrap();
        let nz = NoiseParams::new(0.0, 1.0).unwrap();
        let report = validate(&fixed_interval(100, 10).unwrap(), &p, &nz);
        assert_eq!(report.intervals[0].lhs, -1.0);
        assert!(report.admissible());
    }

    #[test]
    fn validate_flags_small_beta() {
        let p = ProblemParams::new(1.0, 1.0, 20, 100, 1.0).unwrap();
        let nz = NoiseParams::new(0.0, 1.0).unwrap();
        let report = validate(&synchronous(100).unwrap(), &p, &nz);
        assert!(!report.beta_ok);
        assert!(!report.admissible());
    }

    #[test]
    fn validate_reports_every_interval() {
        let p = ProblemParams::new(1.0, 1.0, 4, 100, 2.0).unwrap();
        let nz = NoiseParams::new(9.0, 1.0).unwrap();
        let report = validate(&fixed_interval(100, 20).unwrap(), &p, &nz);
        assert_eq!(report.intervals.len(), 5);
        assert!(report.failures().count() >= 2);
    }

    #[test]
    fn min_beta_examples() {
        let nz0 = NoiseParams::new(0.0, 0.5).unwrap();
        assert_eq!(min_beta(1.0, 20, 1000, &nz0, None), 2.0);
        assert_eq!(min_beta(1.0, 20, 12345, &nz0, Some(7)), 2.0);

        let nz = NoiseParams::new(9.0, 0.75).unwrap();
        let expected = 81.0 * 501f64.ln() + 2.0 * 1.45;
        assert!((min_beta(1.0, 20, 1000, &nz, None) - expected).abs() < 1e-12);
        assert!((expected - 506.45).abs() < 0.01);

        // ln(1 + 1000/676) < ln 3, so ln 3 wins.
        let expected = 81.0 * 3f64.ln() + 2.9;
        assert!((min_beta(1.0, 20, 1000, &nz, Some(26)) - expected).abs() < 1e-12);
    }

    #[test]
    fn min_beta_floor() {
        let nz = NoiseParams::new(0.0, 0.0).unwrap();
        assert!(min_beta(0.5, 1, 10, &nz, None) > 1.0);
    }

    #[test]
    fn growing_with_min_beta_is_admissible() {
        let nz = NoiseParams::new(9.0, 0.75).unwrap();
        for &(t, r) in &[(1000, 26), (1000, 5), (500, 20), (2000, 40), (100, 14)] {
            let beta = min_beta(1.0, 20, t, &nz, Some(r));
            let p = ProblemParams::new(1.0, 1.0, 20, t, beta).unwrap();
            let report = validate(&growing(t, r).unwrap(), &p, &nz);
            assert!(
                report.admissible(),
                "T={t} R={r}: {:?}",
                report.failures().next()
            );
        }
    }

    #[test]
    fn synchronous_admissible_at_threshold() {
        let nz = NoiseParams::new(3.0, 1.0).unwrap();
        for kappa in [1.0f64, 2.0, 5.0] {
            let n = 4usize;
            let beta = (2.0 * kappa * kappa).max(2.0 * kappa * (1.0 + 3.0 / n as f64) - 1.0);
            let p = ProblemParams::new(1.0, kappa, n, 200, beta).unwrap();
            assert!(validate(&synchronous(200).unwrap(), &p, &nz).admissible());
        }
    }
}
