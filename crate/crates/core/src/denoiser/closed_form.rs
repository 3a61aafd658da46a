use crate::error::{Error, Result};
use crate::linalg::{dot, norm, norm_sq};
use crate::scalar::Scalar;

use super::query::check_lipschitz;

/// Exact solution of the two-point denoising problem.
///
/// If `(g1, g2)` already satisfies `|g1 − g2|² ≤ L ⟨g1 − g2, x1 − x2⟩` it is
/// returned unchanged. Otherwise the difference `θ1 − θ2` is projected onto
/// the ball of center `(L/2)(x1 − x2)` and radius `(L/2)|x1 − x2|` while the
/// sum `θ1 + θ2 = g1 + g2` is kept.
pub fn coco2_closed_form<T: Scalar>(x1: &[T], x2: &[T], g1: &[T], g2: &[T], lipschitz: T) -> Result<(Vec<T>, Vec<T>)> {
    let d = x1.len();
    for v in [x2, g1, g2] {
        if v.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: v.len() });
        }
    }
    if d == 0 {
        return Err(Error::Empty("vector dimension"));
    }
    check_lipschitz(lipschitz)?;

    let dg: Vec<T> = g1.iter().zip(g2).map(|(&a, &b)| a - b).collect();
    let dx: Vec<T> = x1.iter().zip(x2).map(|(&a, &b)| a - b).collect();
    if norm_sq(&dg) <= lipschitz * dot(&dg, &dx) {
        return Ok((g1.to_vec(), g2.to_vec()));
    }

    let half_l = lipschitz / T::of(2.0);
    let two = T::of(2.0);
    let offset: Vec<T> = dg.iter().zip(&dx).map(|(&a, &b)| a - half_l * b).collect();
    let offset_norm = norm(&offset);
    // A zero offset means the pair sits at the ball center, which the
    // feasibility test above already accepts.
    assert!(offset_norm > T::zero(), "violated branch with zero projection direction");
    let radius = norm(&dx) * lipschitz / T::of(4.0);
    let scale = radius / offset_norm;

    let mut theta1 = Vec::with_capacity(d);
    let mut theta2 = Vec::with_capacity(d);
    for j in 0..d {
        let mid = (g1[j] + g2[j]) / two;
        let shift = half_l * dx[j] / two;
        let proj = scale * offset[j];
        theta1.push(mid + shift + proj);
        theta2.push(mid - shift - proj);
    }
    Ok((theta1, theta2))
}
