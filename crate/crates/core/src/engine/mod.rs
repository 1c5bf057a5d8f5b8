//! Local SGD: `n` workers take independent stochastic gradient steps and
//! replace their parameters by the group average at every communication
//! time.

mod state;
mod trace;

pub use state::{average, consensus_error, WorkerState};
pub use trace::{AggregateRecord, AggregateTrace, Record, Summary, Trace};

use crate::error::{invalid, Error, Result};
use crate::objectives::Objective;
use crate::params::ProblemParams;
use crate::schedule::Schedule;

/// Recording stride used when none is given: every iteration up to
/// `T = 10^4`, then `ceil(T / 10^4)`.
pub fn default_stride(horizon: usize) -> usize {
    horizon.div_ceil(10_000).max(1)
}

/// One configured Local SGD experiment.
#[derive(Debug, Clone)]
pub struct LocalSgd<'a, O: Objective + ?Sized> {
    objective: &'a O,
    schedule: &'a Schedule,
    params: ProblemParams,
    x0: Vec<f64>,
    stride: usize,
}

impl<'a, O: Objective + ?Sized> LocalSgd<'a, O> {
    /// Starts from the origin with the default recording stride.
    pub fn new(objective: &'a O, schedule: &'a Schedule, params: ProblemParams) -> Result<Self> {
        if schedule.horizon() != params.horizon() {
            return Err(invalid(
                "T",
                format!(
                    "schedule horizon {} differs from T = {}",
                    schedule.horizon(),
                    params.horizon()
                ),
            ));
        }
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs());
        if !close(params.mu(), objective.mu()) {
            return Err(invalid(
                "mu",
                format!(
                    "params declare {} but the objective has {}",
                    params.mu(),
                    objective.mu()
                ),
            ));
        }
        if !close(params.smoothness(), objective.smoothness()) {
            return Err(invalid(
                "L",
                format!(
                    "params declare {} but the objective has {}",
                    params.smoothness(),
                    objective.smoothness()
                ),
            ));
        }
        Ok(Self {
            objective,
            schedule,
            params,
            x0: vec![0.0; objective.dim()],
            stride: default_stride(params.horizon()),
        })
    }

    pub fn with_initial_point(mut self, x0: Vec<f64>) -> Result<Self> {
        self.objective.check_dim(&x0)?;
        self.x0 = x0;
        Ok(self)
    }

    pub fn with_stride(mut self, stride: usize) -> Result<Self> {
        if stride == 0 {
            return Err(invalid("stride", "must be at least 1"));
        }
        self.stride = stride;
        Ok(self)
    }

    pub fn params(&self) -> &ProblemParams {
        &self.params
    }

    pub fn schedule(&self) -> &Schedule {
        self.schedule
    }

    pub fn initial_point(&self) -> &[f64] {
        &self.x0
    }

    fn record(&self, t: usize, state: &WorkerState, comms: usize, scratch: &mut [f64]) -> Record {
        let avg = state.average();
        Record {
            t,
            suboptimality: self.objective.suboptimality(&avg),
            consensus_error: state.consensus_error(),
            avg_grad_sqnorm: state.mean_grad_sqnorm(self.objective, scratch),
            comms,
        }
    }

    /// Runs trial `trial` of the experiment keyed by `seed`.
    ///
    /// Records at `t = 0`, every multiple of the stride, every
    /// communication time and `t = T`.
    pub fn run(&self, seed: u64, trial: u64) -> Result<Trace> {
        let horizon = self.params.horizon();
        let mut state = WorkerState::replicate(&self.x0, self.params.workers());
        let mut scratch = vec![0.0; self.objective.dim()];
        let mut records = Vec::with_capacity(horizon / self.stride + self.schedule.rounds() + 2);
        let mut comm_iter = self.schedule.comm_times().iter().peekable();
        let mut comms = 0;

        records.push(self.record(0, &state, comms, &mut scratch));
        for t in 0..horizon {
            let eta = self.params.step_size_unchecked(t);
            state.local_step(self.objective, eta, seed, trial, t, &mut scratch)?;
            let next = t + 1;
            let communicate = comm_iter.next_if_eq(&&next).is_some();
            if communicate {
                state.synchronize();
                comms += 1;
            }
            if communicate || next % self.stride == 0 || next == horizon {
                records.push(self.record(next, &state, comms, &mut scratch));
            }
        }
        Ok(Trace { records })
    }

    fn run_tagged(&self, seed: u64, trial: u64) -> Result<Trace> {
        self.run(seed, trial).map_err(|e| Error::Trial {
            trial,
            source: Box::new(e),
        })
    }

    /// Runs trials `0..trials` and summarizes them pointwise. The result
    /// does not depend on the number of threads.
    pub fn run_trials(&self, seed: u64, trials: usize) -> Result<AggregateTrace> {
        #[cfg(feature = "parallel")]
        {
            self.run_trials_parallel(seed, trials)
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.run_trials_sequential(seed, trials)
        }
    }

    pub fn run_trials_sequential(&self, seed: u64, trials: usize) -> Result<AggregateTrace> {
        check_trials(trials)?;
        let traces = (0..trials as u64)
            .map(|k| self.run_tagged(seed, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(AggregateTrace::from_traces(&traces))
    }

    #[cfg(feature = "parallel")]
    pub fn run_trials_parallel(&self, seed: u64, trials: usize) -> Result<AggregateTrace> {
        use rayon::prelude::*;

        check_trials(trials)?;
        let traces = (0..trials as u64)
            .into_par_iter()
            .map(|k| self.run_tagged(seed, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(AggregateTrace::from_traces(&traces))
    }
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(invalid("trials", "must be at least 1"));
    }
    Ok(())
}
