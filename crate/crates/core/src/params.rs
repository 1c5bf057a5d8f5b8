//! Problem constants shared by the step-size rule, the schedule checks
//! and the bound evaluators.

use crate::error::{invalid, Error, Result};

/// Strong convexity `mu`, smoothness `l`, worker count, horizon and
/// step-size offset `beta`.
///
/// `beta` only has to be positive for the dynamics to be well defined.
/// The admissibility condition `beta >= 2 kappa^2` is reported by
/// [`crate::schedules::validate`], and the fixed-interval bound rejects
/// `beta <= 1` on its own.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    mu: f64,
    l: f64,
    workers: usize,
    horizon: usize,
    beta: f64,
}

impl ProblemParams {
    pub fn new(mu: f64, l: f64, workers: usize, horizon: usize, beta: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(invalid(
                "mu",
                format!("must be positive and finite, got {mu}"),
            ));
        }
        if !(l.is_finite() && l >= mu) {
            return Err(invalid(
                "L",
                format!("must satisfy L >= mu = {mu}, got {l}"),
            ));
        }
        if workers == 0 {
            return Err(invalid("n", "need at least one worker"));
        }
        if horizon == 0 {
            return Err(invalid("T", "need at least one iteration"));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(invalid(
                "beta",
                format!("must be positive and finite, got {beta}"),
            ));
        }
        Ok(Self {
            mu,
            l,
            workers,
            horizon,
            beta,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn smoothness(&self) -> f64 {
        self.l
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Condition number `L / mu`.
    pub fn kappa(&self) -> f64 {
        self.l / self.mu
    }

    pub fn with_beta(self, beta: f64) -> Result<Self> {
        Self::new(self.mu, self.l, self.workers, self.horizon, beta)
    }

    pub fn with_workers(self, workers: usize) -> Result<Self> {
        Self::new(self.mu, self.l, workers, self.horizon, self.beta)
    }

    /// `eta_t = 2 / (mu (t + beta))` for `0 <= t < T`.
    pub fn step_size(&self, t: usize) -> Result<f64> {
        if t >= self.horizon {
            return Err(Error::OutOfRange {
                t,
                limit: self.horizon,
            });
        }
        Ok(self.step_size_unchecked(t))
    }

    #[inline]
    pub(crate) fn step_size_unchecked(&self, t: usize) -> f64 {
        2.0 / (self.mu * (t as f64 + self.beta))
    }
}

/// Strong-growth noise constants: `E||g - grad F||^2 <= c ||grad F||^2 + sigma2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    c: f64,
    sigma2: f64,
}

impl NoiseParams {
    pub fn new(c: f64, sigma2: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(invalid("c", format!("must be nonnegative, got {c}")));
        }
        if !(sigma2.is_finite() && sigma2 >= 0.0) {
            return Err(invalid(
                "sigma2",
                format!("must be nonnegative, got {sigma2}"),
            ));
        }
        Ok(Self { c, sigma2 })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
}
