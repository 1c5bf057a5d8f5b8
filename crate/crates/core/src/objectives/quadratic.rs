use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

use super::{sq_norm, Objective};
use crate::error::{invalid, Result};
use crate::params::NoiseParams;

/// `F(x) = ||x||^2 / 2` observed through `grad f(x, z) = x (1 + z1) + z2`
/// with `z1_i ~ N(0, c1)` and `z2_i ~ N(0, c2)`.
///
/// The gradient noise then satisfies the strong-growth condition with
/// equality: `E||g - x||^2 = c1 ||x||^2 + d c2`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticStrongGrowth {
    dim: usize,
    c1: f64,
    c2: f64,
}

impl QuadraticStrongGrowth {
    pub fn new(dim: usize, c1: f64, c2: f64) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("d", "dimension must be at least 1"));
        }
        if !(c1.is_finite() && c1 >= 0.0) {
            return Err(invalid("c1", format!("must be nonnegative, got {c1}")));
        }
        if !(c2.is_finite() && c2 >= 0.0) {
            return Err(invalid("c2", format!("must be nonnegative, got {c2}")));
        }
        Ok(Self { dim, c1, c2 })
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// `c = c1`, `sigma^2 = d c2`.
    pub fn noise_params(&self) -> NoiseParams {
        NoiseParams::new(self.c1, self.dim as f64 * self.c2).expect("validated at construction")
    }
}

impl Objective for QuadraticStrongGrowth {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        0.5 * sq_norm(x)
    }

    fn grad_into(&self, x: &[f64], out: &mut [f64]) {
        out.copy_from_slice(x);
    }

    fn sample_grad_into(&self, x: &[f64], rng: &mut dyn RngCore, out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        let s1 = self.c1.sqrt();
        let s2 = self.c2.sqrt();
        for (o, &xi) in out.iter_mut().zip(x) {
            let z1: f64 = StandardNormal.sample(rng);
            let z2: f64 = StandardNormal.sample(rng);
            *o = xi * (1.0 + s1 * z1) + s2 * z2;
        }
    }

    fn f_star(&self) -> f64 {
        0.0
    }

    fn mu(&self) -> f64 {
        1.0
    }

    fn smoothness(&self) -> f64 {
        1.0
    }

    fn noise(&self) -> Option<NoiseParams> {
        Some(self.noise_params())
    }
}
