use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamParams<T> {
    pub gamma: T,
    pub beta1: T,
    pub beta2: T,
    pub eps: T,
}

impl<T: Scalar> AdamParams<T> {
    /// `β1 = 0.9`, `β2 = 0.999`, `ε = 1e-8`.
    pub fn with_gamma(gamma: T) -> Self {
        Self { gamma, beta1: T::of(0.9), beta2: T::of(0.999), eps: T::of(1e-8) }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > T::zero() && self.gamma.is_finite()) {
            return Err(invalid("gamma", format!("must be positive, got {}", self.gamma)));
        }
        for (name, b) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(b >= T::zero() && b < T::one()) {
                return Err(invalid(name, format!("must lie in [0, 1), got {b}")));
            }
        }
        if !(self.eps > T::zero()) {
            return Err(invalid("eps", format!("must be positive, got {}", self.eps)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdamState<T> {
    pub x: Vec<T>,
    pub m: Vec<T>,
    pub v: Vec<T>,
    pub k: usize,
    pub params: AdamParams<T>,
}

impl<T: Scalar> AdamState<T> {
    pub fn new(x0: Vec<T>, params: AdamParams<T>) -> Result<Self> {
        params.validate()?;
        let d = x0.len();
        Ok(Self { x: x0, m: vec![T::zero(); d], v: vec![T::zero(); d], k: 0, params })
    }

    pub fn step(&mut self, g: &[T]) -> Result<()> {
        if g.len() != self.x.len() {
            return Err(Error::DimensionMismatch { expected: self.x.len(), found: g.len() });
        }
        let AdamParams { gamma, beta1, beta2, eps } = self.params;
        self.k += 1;
        let k = i32::try_from(self.k).unwrap_or(i32::MAX);
        let c1 = T::one() - beta1.powi(k);
        let c2 = T::one() - beta2.powi(k);
        let one = T::one();
        for j in 0..g.len() {
            self.m[j] = beta1 * self.m[j] + (one - beta1) * g[j];
            self.v[j] = beta2 * self.v[j] + (one - beta2) * g[j] * g[j];
            let m_hat = self.m[j] / c1;
            let v_hat = self.v[j] / c2;
            self.x[j] -= gamma * m_hat / (v_hat.sqrt() + eps);
        }
        Ok(())
    }
}
