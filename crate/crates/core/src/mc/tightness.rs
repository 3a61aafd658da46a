use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Result};

use super::normal::norm_cdf;
use super::stats::McEstimate;

/// Two noisy gradients in one dimension at points `Δx` apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightnessQuery {
    /// `x₁ − x₂ ≥ 0`.
    pub dx: f64,
    /// `∇f(x₁) − ∇f(x₂)`.
    pub dgrad: f64,
    /// Constant used in the constraint.
    pub lipschitz: f64,
    pub sigma: f64,
}

impl TightnessQuery {
    pub fn new(dx: f64, dgrad: f64, lipschitz: f64, sigma: f64) -> Result<Self> {
        if !(dx >= 0.0 && dx.is_finite()) {
            return Err(invalid("dx", format!("must be non-negative, got {dx}")));
        }
        if !dgrad.is_finite() {
            return Err(invalid("dgrad", "must be finite"));
        }
        if !(lipschitz > 0.0 && lipschitz.is_finite()) {
            return Err(invalid("L", format!("must be positive, got {lipschitz}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(invalid("sigma", format!("must be positive, got {sigma}")));
        }
        Ok(Self { dx, dgrad, lipschitz, sigma })
    }

    /// `f(x) = x²/2` queried with `L = 1 + ΔL`.
    pub fn quadratic(dx: f64, delta_l: f64, sigma: f64) -> Result<Self> {
        Self::new(dx, dx, 1.0 + delta_l, sigma)
    }
}

/// Probability that the two noisy gradients satisfy the constraint.
pub fn p_inactive_theoretical(q: &TightnessQuery) -> f64 {
    let s = std::f64::consts::SQRT_2 * q.sigma;
    let p = norm_cdf((q.lipschitz * q.dx - q.dgrad) / s) - norm_cdf(-q.dgrad / s);
    p.clamp(0.0, 1.0)
}

pub fn p_active_theoretical(q: &TightnessQuery) -> f64 {
    1.0 - p_inactive_theoretical(q)
}

/// Fraction of `n` noisy pairs that violate the constraint.
pub fn p_active_empirical(q: &TightnessQuery, n: usize, rng: &mut dyn RngCore) -> Result<McEstimate> {
    if n < 2 {
        return Err(invalid("N", "need at least two replications"));
    }
    let mut hits = Vec::with_capacity(n);
    for _ in 0..n {
        let w1: f64 = StandardNormal.sample(rng);
        let w2: f64 = StandardNormal.sample(rng);
        let dg = q.dgrad + q.sigma * (w1 - w2);
        let violated = dg * dg > q.lipschitz * dg * q.dx;
        hits.push(if violated { 1.0 } else { 0.0 });
    }
    McEstimate::from_samples(&hits)
}
