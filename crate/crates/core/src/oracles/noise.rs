use rand::{Rng, RngCore};
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Isotropic Gaussian gradient noise, `w ~ N(0, σ² I)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel<T> {
    sigma: T,
}

impl<T: Scalar> NoiseModel<T> {
    pub fn new(sigma: T) -> Result<Self> {
        if !(sigma >= T::zero()) || !sigma.is_finite() {
            return Err(invalid("sigma", format!("must be finite and nonnegative, got {sigma}")));
        }
        Ok(Self { sigma })
    }

    pub fn noiseless() -> Self {
        Self { sigma: T::zero() }
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    /// Adds one draw of `w` to `v`. Consumes exactly `v.len()` standard
    /// normal draws, also when `σ = 0`.
    pub fn perturb(&self, v: &mut [T], rng: &mut dyn RngCore) {
        for x in v.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *x += self.sigma * T::of(z);
        }
    }
}

/// One oracle answer: the query point and the gradient returned there.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSample<T> {
    pub x: Vec<T>,
    pub g: Vec<T>,
    /// Oracle calls spent on this sample.
    pub calls: usize,
}

/// `g = ∇f(x) + w` with `w ~ N(0, σ² I)`.
pub fn noisy_query<T: Scalar>(
    x: &[T],
    true_grad: Vec<T>,
    noise: &NoiseModel<T>,
    rng: &mut dyn RngCore,
) -> OracleSample<T> {
    let mut g = true_grad;
    noise.perturb(&mut g, rng);
    OracleSample { x: x.to_vec(), g, calls: 1 }
}
