use rand::{Rng, RngCore};

use super::{sq_norm, Dataset, Objective};
use crate::error::{invalid, Error, Result};

const FSTAR_MAX_ITERS: usize = 1_000_000;

/// L2-regularized logistic loss
/// `F(x) = (1/N) sum_j [ln(1 + exp(x.A_j)) - 1{b_j = 1} x.A_j] + (lambda/2)||x||^2`.
///
/// Stochastic gradients average `batch` points drawn uniformly with
/// replacement.
#[derive(Debug, Clone)]
pub struct LogisticL2 {
    data: Dataset,
    lambda: f64,
    batch: usize,
    smoothness: f64,
    f_star: f64,
}

impl LogisticL2 {
    pub fn new(data: Dataset, lambda: f64, batch: usize) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(invalid("lambda", format!("must be positive, got {lambda}")));
        }
        if batch == 0 {
            return Err(invalid("batch", "must be at least 1"));
        }
        let max_row = data.rows().iter().map(|r| r.sq_norm()).fold(0.0, f64::max);
        Ok(Self {
            data,
            lambda,
            batch,
            smoothness: lambda + 0.25 * max_row,
            f_star: 0.0,
        })
    }

    /// Sets the value reported by [`Objective::f_star`] (0 until set).
    pub fn with_f_star(mut self, f_star: f64) -> Self {
        self.f_star = f_star;
        self
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn batch(&self) -> usize {
        self.batch
    }

    /// Runs full-gradient descent with step `1/L` from the origin until
    /// `||grad F|| <= tol * lambda` and returns `F` at the final iterate.
    ///
    /// The result overestimates `F*` by at most `||grad F||^2 / (2 lambda)`,
    /// i.e. `tol^2 lambda / 2`.
    pub fn estimate_fstar(&self, tol: f64) -> Result<f64> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(invalid("tol", format!("must be positive, got {tol}")));
        }
        let target = tol * self.lambda;
        let step = 1.0 / self.smoothness;
        let mut x = vec![0.0; self.dim()];
        let mut g = vec![0.0; self.dim()];
        let mut grad_norm = f64::INFINITY;
        for _ in 0..FSTAR_MAX_ITERS {
            self.grad_into(&x, &mut g);
            grad_norm = sq_norm(&g).sqrt();
            if grad_norm <= target {
                return Ok(self.eval(&x));
            }
            for (xi, gi) in x.iter_mut().zip(&g) {
                *xi -= step * gi;
            }
        }
        Err(Error::NoConvergence {
            iters: FSTAR_MAX_ITERS,
            grad_norm,
            target,
        })
    }
}

/// `ln(1 + e^z)` without overflow.
#[inline]
pub(crate) fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

#[inline]
pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl Objective for LogisticL2 {
    fn dim(&self) -> usize {
        self.data.dim()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        let loss: f64 = self
            .data
            .iter()
            .map(|(row, label)| {
                let z = row.dot(x);
                softplus(z) - if label { z } else { 0.0 }
            })
            .sum();
        loss / self.data.len() as f64 + 0.5 * self.lambda * sq_norm(x)
    }

    fn grad_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        out.fill(0.0);
        for (row, label) in self.data.iter() {
            let r = sigmoid(row.dot(x)) - f64::from(u8::from(label));
            row.axpy(r, out);
        }
        let scale = 1.0 / self.data.len() as f64;
        for (o, xi) in out.iter_mut().zip(x) {
            *o = *o * scale + self.lambda * xi;
        }
    }

    fn sample_grad_into(&self, x: &[f64], rng: &mut dyn RngCore, out: &mut [f64]) {
        out.fill(0.0);
        let n = self.data.len();
        for _ in 0..self.batch {
            let j = rng.random_range(0..n);
            let row = &self.data.rows()[j];
            let r = sigmoid(row.dot(x)) - f64::from(u8::from(self.data.labels()[j]));
            row.axpy(r, out);
        }
        let scale = 1.0 / self.batch as f64;
        for (o, xi) in out.iter_mut().zip(x) {
            *o = *o * scale + self.lambda * xi;
        }
    }

    fn f_star(&self) -> f64 {
        self.f_star
    }

    fn mu(&self) -> f64 {
        self.lambda
    }

    fn smoothness(&self) -> f64 {
        self.smoothness
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{parse_libsvm_str, SparseRow};
    use crate::rng::StreamRng;

    fn single(a: f64, label: bool) -> Dataset {
        Dataset::new(
            vec![SparseRow::from_pairs(vec![(0, a)]).unwrap()],
            vec![label],
            1,
        )
    }

    #[test]
    fn eval_at_origin_is_ln2() {
        let ds = parse_libsvm_str("+1 1:1 3:2\n-1 2:0.5\n+1 3:-1\n", None).unwrap();
        let obj = LogisticL2::new(ds, 0.7, 1).unwrap();
        assert!((obj.eval(&[0.0; 3]) - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn eval_large_margin_is_stable() {
        // Regularizer is negligible at this lambda.
        let obj = LogisticL2::new(single(1.0, true), 1e-300, 1).unwrap();
        let v = obj.eval(&[10.0]);
        assert!((v - 4.539_889_921_773_010_4e-5).abs() < 1e-17, "{v}");
        assert!(obj.eval(&[800.0]).is_finite());
        assert!(obj.eval(&[-800.0]).is_finite());
    }

    #[test]
    fn eval_with_empty_features() {
        let ds = Dataset::new(vec![SparseRow::default(); 3], vec![true, false, true], 2);
        let obj = LogisticL2::new(ds, 2.0, 1).unwrap();
        let v = obj.try_eval(&[1.0, 1.0]).unwrap();
        assert!((v - (std::f64::consts::LN_2 + 2.0)).abs() < 1e-15);
        assert!(obj.try_eval(&[1.0]).is_err());
    }

    #[test]
    fn sample_grad_at_origin() {
        let ds = Dataset::new(
            vec![SparseRow::from_pairs(vec![(0, 2.0), (2, -4.0)]).unwrap()],
            vec![true],
            3,
        );
        let obj = LogisticL2::new(ds, 1e-300, 1).unwrap();
        let mut rng = StreamRng::new(0, 0, 0, 0);
        let g = obj.sample_grad(&[0.0; 3], &mut rng).unwrap();
        assert_eq!(g, vec![-1.0, 0.0, 2.0]);
    }

    #[test]
    fn single_point_sample_equals_full_gradient() {
        let ds = parse_libsvm_str("-1 1:0.3 2:-1.2 4:2\n", None).unwrap();
        let obj = LogisticL2::new(ds, 0.05, 3).unwrap();
        let x = [0.4, -0.2, 1.0, 0.7];
        let full = obj.grad(&x).unwrap();
        for k in 0..5 {
            let mut rng = StreamRng::new(9, 0, 0, k);
            let g = obj.sample_grad(&x, &mut rng).unwrap();
            for (a, b) in g.iter().zip(&full) {
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn smoothness_constant() {
        let ds = parse_libsvm_str("+1 1:1 2:1\n-1 1:3\n", None).unwrap();
        let obj = LogisticL2::new(ds, 0.05, 1).unwrap();
        assert!((obj.smoothness() - (0.05 + 0.25 * 9.0)).abs() < 1e-15);
        assert_eq!(obj.mu(), 0.05);
    }

    #[test]
    fn rejects_empty_dataset_and_bad_lambda() {
        let empty = Dataset::new(vec![], vec![], 3);
        assert_eq!(
            LogisticL2::new(empty, 0.1, 1).unwrap_err(),
            Error::EmptyDataset
        );
        assert!(LogisticL2::new(single(1.0, true), 0.0, 1).is_err());
        assert!(LogisticL2::new(single(1.0, true), 0.1, 0).is_err());
    }

    #[test]
    fn fstar_zero_features() {
        let ds = Dataset::new(vec![SparseRow::default()], vec![true], 1);
        let obj = LogisticL2::new(ds, 0.5, 1).unwrap();
        let f = obj.estimate_fstar(1e-8).unwrap();
        assert!((f - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn fstar_scalar_matches_bisection() {
        // Minimizer of ln(1 + e^x) - x + x^2/2 solves sigmoid(x) - 1 + x = 0.
        let deriv = |x: f64| 1.0 / (1.0 + (-x).exp()) - 1.0 + x;
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if deriv(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let x_star = 0.5 * (lo + hi);
        let f_star = (1.0 + x_star.exp()).ln() - x_star + 0.5 * x_star * x_star;
        assert!((x_star - 0.401_058_137_541_547).abs() < 1e-12);
        assert!((f_star - 0.593_014_558_086_589).abs() < 1e-12);

        let obj = LogisticL2::new(single(1.0, true), 1.0, 1).unwrap();
        let est = obj.estimate_fstar(1e-8).unwrap();
        assert!(est >= f_star - 1e-15);
        assert!(est - f_star <= 0.5 * 1e-16 + 1e-15);
    }

    #[test]
    fn fstar_rejects_bad_tol() {
        let obj = LogisticL2::new(single(1.0, true), 1.0, 1).unwrap();
        assert!(obj.estimate_fstar(0.0).is_err());
    }
}
