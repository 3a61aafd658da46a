use sha2::{Digest, Sha256};

use crate::blocks::Blocks;
use crate::error::{invalid, Error, Result};
use crate::linalg::{axpy, dot, norm, norm_sq};
use crate::scalar::Scalar;

/// Labelled examples `(a_i, y_i)` with `y_i ∈ {−1, +1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    features: Blocks<T>,
    labels: Vec<T>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(features: Blocks<T>, labels: Vec<T>) -> Result<Self> {
        if labels.len() != features.count() {
            return Err(Error::BlockCount { expected: features.count(), found: labels.len() });
        }
        if labels.is_empty() {
            return Err(Error::Empty("dataset"));
        }
        if let Some(bad) = labels.iter().find(|&&y| y != T::one() && y != -T::one()) {
            return Err(invalid("labels", format!("must be -1 or +1, got {bad}")));
        }
        Ok(Self { features, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.dim()
    }

    pub fn features(&self) -> &Blocks<T> {
        &self.features
    }

    pub fn labels(&self) -> &[T] {
        &self.labels
    }

    /// SHA-256 of the dense representation, hex encoded.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.len() as u64).to_le_bytes());
        h.update((self.dim() as u64).to_le_bytes());
        for &v in self.labels.iter().chain(self.features.as_slice()) {
            h.update(v.to_f64_lossy().to_le_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// `σ(t) = 1 / (1 + e^{−t})`
#[inline]
pub fn logistic_sigmoid<T: Scalar>(t: T) -> T {
    if t >= T::zero() {
        T::one() / (T::one() + (-t).exp())
    } else {
        let e = t.exp();
        e / (T::one() + e)
    }
}

/// `log(1 + e^{−m})` without overflow.
#[inline]
fn log1p_exp_neg<T: Scalar>(m: T) -> T {
    if m > T::zero() {
        (-m).exp().ln_1p()
    } else {
        -m + m.exp().ln_1p()
    }
}

/// Finite-sum regularized logistic regression,
/// `f(x) = (1/n) Σ [log(1 + exp(−y_i a_iᵀx)) + (λ/2)|x|²]`.
///
/// The regularizer is part of every example's loss, so one sampled example
/// gradient is unbiased for the full gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticObjective<T> {
    data: Dataset<T>,
    lambda: T,
}

impl<T: Scalar> LogisticObjective<T> {
    pub fn new(data: Dataset<T>, lambda: T) -> Result<Self> {
        if !(lambda >= T::zero()) || !lambda.is_finite() {
            return Err(invalid("lambda", format!("must be finite and nonnegative, got {lambda}")));
        }
        Ok(Self { data, lambda })
    }

    pub fn data(&self) -> &Dataset<T> {
        &self.data
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.data.dim()
    }

    fn check(&self, i: usize, x: &[T]) -> Result<()> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.len() });
        }
        self.check_x(x)
    }

    fn check_x(&self, x: &[T]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(())
    }

    /// Loss of example `i` including its regularization share.
    pub fn single_loss(&self, i: usize, x: &[T]) -> Result<T> {
        self.check(i, x)?;
        let a = self.data.features.block(i);
        let margin = self.data.labels[i] * dot(a, x);
        Ok(log1p_exp_neg(margin) + self.lambda / T::of(2.0) * norm_sq(x))
    }

    /// `−y_i σ(−y_i a_iᵀx) a_i + λ x`
    pub fn single_grad(&self, i: usize, x: &[T]) -> Result<Vec<T>> {
        self.check(i, x)?;
        let mut g: Vec<T> = x.iter().map(|&v| self.lambda * v).collect();
        self.add_data_grad(i, x, T::one(), &mut g);
        Ok(g)
    }

    fn add_data_grad(&self, i: usize, x: &[T], weight: T, out: &mut [T]) {
        let a = self.data.features.block(i);
        let y = self.data.labels[i];
        let coef = -y * logistic_sigmoid(-y * dot(a, x));
        axpy(weight * coef, a, out);
    }

    pub fn loss(&self, x: &[T]) -> Result<T> {
        self.check_x(x)?;
        let n = T::of_usize(self.len());
        let data: T =
            (0..self.len()).map(|i| log1p_exp_neg(self.data.labels[i] * dot(self.data.features.block(i), x))).sum();
        Ok(data / n + self.lambda / T::of(2.0) * norm_sq(x))
    }

    /// Mean of the example gradients.
    pub fn full_grad(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_x(x)?;
        let inv_n = T::one() / T::of_usize(self.len());
        let mut g: Vec<T> = x.iter().map(|&v| self.lambda * v).collect();
        for i in 0..self.len() {
            self.add_data_grad(i, x, inv_n, &mut g);
        }
        Ok(g)
    }

    /// `(1/4) max_i |a_i|² + λ`, an upper bound on the gradient Lipschitz
    /// constant of every example loss (and hence of their mean).
    pub fn lipschitz(&self) -> T {
        let max_sq = self.data.features.iter().map(norm_sq).fold(T::zero(), T::max);
        max_sq / T::of(4.0) + self.lambda
    }

    /// Deterministic full-gradient minimization (Nesterov momentum with
    /// gradient-based restart) until `|∇f| ≤ tol`.
    pub fn minimize(&self, tol: T, max_iter: usize) -> Result<Vec<T>> {
        let d = self.dim();
        let step = T::one() / self.lipschitz().max(T::min_positive_value());
        let mut x = vec![T::zero(); d];
        let mut y = x.clone();
        let mut t = T::one();
        let (one, two, four) = (T::one(), T::of(2.0), T::of(4.0));
        for _ in 0..max_iter {
            let g = self.full_grad(&y)?;
            if norm(&g) <= tol {
                return Ok(y);
            }
            let x_next: Vec<T> = y.iter().zip(&g).map(|(&yi, &gi)| yi - step * gi).collect();
            let progress: T = g.iter().zip(x_next.iter().zip(&x)).map(|(&gi, (&a, &b))| gi * (a - b)).sum();
            if progress > T::zero() {
                t = one;
            }
            let t_next = (one + (one + four * t * t).sqrt()) / two;
            let beta = (t - one) / t_next;
            for j in 0..d {
                y[j] = x_next[j] + beta * (x_next[j] - x[j]);
            }
            x = x_next;
            t = t_next;
        }
        let g = norm(&self.full_grad(&x)?);
        if g <= tol {
            Ok(x)
        } else {
            Err(Error::NotConverged(format!("logistic minimizer: gradient norm {g} after {max_iter} iterations")))
        }
    }
}
