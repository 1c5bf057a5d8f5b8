//! Objective functions with exact gradients and unbiased stochastic
//! gradient oracles.
//!
//! Every stochastic call takes the random stream explicitly, so objectives
//! hold no mutable state and can be shared across workers and threads.

mod libsvm;
mod logistic;
mod quadratic;

pub use libsvm::{parse_libsvm, parse_libsvm_str, read_libsvm, Dataset, SparseRow};
pub use logistic::LogisticL2;
pub use quadratic::QuadraticStrongGrowth;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::params::NoiseParams;

pub trait Objective: Sync {
    fn dim(&self) -> usize;

    /// `F(x)`. Callers guarantee `x.len() == self.dim()`.
    fn eval(&self, x: &[f64]) -> f64;

    /// Writes `grad F(x)` into `out`.
    fn grad_into(&self, x: &[f64], out: &mut [f64]);

    /// Writes one draw of the stochastic gradient at `x` into `out`.
    fn sample_grad_into(&self, x: &[f64], rng: &mut dyn RngCore, out: &mut [f64]);

    /// Optimal value `F*` (or the best available estimate of it).
    fn f_star(&self) -> f64;

    /// Strong convexity modulus.
    fn mu(&self) -> f64;

    /// Smoothness modulus.
    fn smoothness(&self) -> f64;

    /// Noise constants, when known in closed form.
    fn noise(&self) -> Option<NoiseParams> {
        None
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    fn try_eval(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.eval(x))
    }

    fn grad(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let mut out = vec![0.0; self.dim()];
        self.grad_into(x, &mut out);
        Ok(out)
    }

    fn sample_grad(&self, x: &[f64], rng: &mut dyn RngCore) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let mut out = vec![0.0; self.dim()];
        self.sample_grad_into(x, rng, &mut out);
        Ok(out)
    }

    fn suboptimality(&self, x: &[f64]) -> f64 {
        self.eval(x) - self.f_star()
    }
}

pub(crate) fn sq_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}
