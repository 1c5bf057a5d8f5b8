use rand::RngCore;

use crate::error::{Error, Result};
use crate::objectives::{sq_norm, Objective};
use crate::rng::StreamRng;

/// Parameter vectors of all workers.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkerState {
    workers: Vec<Vec<f64>>,
}

impl WorkerState {
    /// `n` workers all starting at `x0`.
    pub fn replicate(x0: &[f64], n: usize) -> Self {
        assert!(n >= 1, "need at least one worker");
        Self {
            workers: vec![x0.to_vec(); n],
        }
    }

    pub fn from_vectors(workers: Vec<Vec<f64>>) -> Result<Self> {
        let dim = workers
            .first()
            .ok_or(Error::InvalidParam {
                name: "n",
                reason: "need at least one worker".into(),
            })?
            .len();
        if let Some(bad) = workers.iter().find(|w| w.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.len(),
            });
        }
        Ok(Self { workers })
    }

    pub fn len(&self) -> usize {
        self.workers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.workers.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.workers[0].len()
    }

    pub fn workers(&self) -> &[Vec<f64>] {
        &self.workers
    }

    pub fn average(&self) -> Vec<f64> {
        average(&self.workers)
    }

    pub fn consensus_error(&self) -> f64 {
        consensus_error(&self.workers)
    }

    /// `(1/n) sum_i ||grad F(x_i)||^2`.
    pub fn mean_grad_sqnorm<O: Objective + ?Sized>(
        &self,
        objective: &O,
        scratch: &mut [f64],
    ) -> f64 {
        let total: f64 = self
            .workers
            .iter()
            .map(|x| {
                objective.grad_into(x, scratch);
                sq_norm(scratch)
            })
            .sum();
        total / self.len() as f64
    }

    /// One local SGD step on every worker: `x_i <- x_i - eta g_i`, with
    /// worker `i` drawing from stream `(seed, trial, i, step)`.
    pub fn local_step<O: Objective + ?Sized>(
        &mut self,
        objective: &O,
        eta: f64,
        seed: u64,
        trial: u64,
        step: usize,
        scratch: &mut [f64],
    ) -> Result<()> {
        for (i, x) in self.workers.iter_mut().enumerate() {
            let mut rng = StreamRng::new(seed, trial, i as u64, step as u64);
            objective.sample_grad_into(x, &mut rng as &mut dyn RngCore, scratch);
            for (xi, gi) in x.iter_mut().zip(scratch.iter()) {
                *xi -= eta * gi;
            }
            if !x.iter().all(|v| v.is_finite()) {
                return Err(Error::Diverged { t: step, worker: i });
            }
        }
        Ok(())
    }

    /// Replaces every worker by the common average.
    pub fn synchronize(&mut self) {
        let avg = self.average();
        for x in &mut self.workers {
            x.copy_from_slice(&avg);
        }
    }
}

/// Mean of the vectors, computed as `u_0 + (1/n) sum_i (u_i - u_0)` so that
/// identical inputs average to themselves exactly.
pub fn average<V: AsRef<[f64]>>(vectors: &[V]) -> Vec<f64> {
    let first = vectors[0].as_ref();
    let n = vectors.len() as f64;
    let mut acc = vec![0.0; first.len()];
    for v in &vectors[1..] {
        for ((a, &vi), &fi) in acc.iter_mut().zip(v.as_ref()).zip(first) {
            *a += vi - fi;
        }
    }
    first.iter().zip(acc).map(|(&f, a)| f + a / n).collect()
}

/// `sum_i ||u_i - u_bar||^2` through `sum_i ||u_i||^2 - n ||u_bar||^2`.
///
/// Vectors are shifted by `u_0` first (the dispersion is shift invariant),
/// which keeps identical inputs at exactly zero and limits cancellation.
pub fn consensus_error<V: AsRef<[f64]>>(vectors: &[V]) -> f64 {
    let first = vectors[0].as_ref();
    let n = vectors.len() as f64;
    let mut sum = vec![0.0; first.len()];
    let mut total_sq = 0.0;
    for v in &vectors[1..] {
        for ((s, &vi), &fi) in sum.iter_mut().zip(v.as_ref()).zip(first) {
            let u = vi - fi;
            *s += u;
            total_sq += u * u;
        }
    }
    let mean_sq: f64 = sum.iter().map(|s| (s / n) * (s / n)).sum();
    (total_sq - n * mean_sq).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn consensus_examples() {
        assert_eq!(consensus_error(&vec![vec![1.5, -2.0]; 7]), 0.0);
        assert_eq!(consensus_error(&[vec![1.0], vec![-1.0]]), 2.0);
        assert_eq!(consensus_error(&[vec![0.3, 0.1]]), 0.0);
    }

    #[test]
    fn average_of_identical_vectors_is_exact() {
        let v = vec![0.1, 1.0 / 3.0, -7.123456789];
        for n in 1..40 {
            let vs = vec![v.clone(); n];
            assert_eq!(average(&vs), v);
        }
    }

    #[test]
    fn synchronize_zeroes_dispersion() {
        let mut s =
            WorkerState::from_vectors(vec![vec![1.0, 2.0], vec![3.0, -1.0], vec![0.5, 0.25]])
                .unwrap();
        s.synchronize();
        assert_eq!(s.consensus_error(), 0.0);
        assert!(s.workers().windows(2).all(|w| w[0] == w[1]));
        let avg = &s.workers()[0];
        assert_eq!(avg[0], 1.5);
        assert!((avg[1] - 1.25 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_ragged_workers() {
        assert!(WorkerState::from_vectors(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(WorkerState::from_vectors(vec![]).is_err());
    }
}
