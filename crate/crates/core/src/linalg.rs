//! Small dense vector kernels and a matrix-free power iteration.

use crate::scalar::Scalar;

#[inline]
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub fn norm_sq<T: Scalar>(a: &[T]) -> T {
    dot(a, a)
}

#[inline]
pub fn norm<T: Scalar>(a: &[T]) -> T {
    norm_sq(a).sqrt()
}

pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// `y += alpha * x`
#[inline]
pub fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Infinity norm of `a - b`.
pub fn inf_dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |m, (&x, &y)| m.max((x - y).abs()))
}

pub fn inf_norm<T: Scalar>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

pub fn dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y)).sqrt()
}

/// Largest eigenvalue of a symmetric positive semidefinite operator of size
/// `n`, given only through `apply(v, out)` computing `out = M v`.
///
/// Iterates until the Rayleigh quotient changes by at most `rel_tol` relative
/// to its magnitude, or `max_iter` products have been taken.
pub fn power_iteration<T, F>(n: usize, mut apply: F, rel_tol: T, max_iter: usize) -> T
where
    T: Scalar,
    F: FnMut(&[T], &mut [T]),
{
    if n == 0 {
        return T::zero();
    }
    // Fixed pseudo-random start so no eigenspace is missed by symmetry.
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut v: Vec<T> = (0..n)
        .map(|_| {
            state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
            T::of(((state >> 11) as f64) / ((1u64 << 53) as f64) + 0.5)
        })
        .collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let mut w = vec![T::zero(); n];
    let mut lambda = T::zero();
    for _ in 0..max_iter {
        apply(&v, &mut w);
        let next = dot(&v, &w);
        let nw = norm(&w);
        if nw == T::zero() {
            return T::zero();
        }
        for (vi, &wi) in v.iter_mut().zip(&w) {
            *vi = wi / nw;
        }
        let converged = (next - lambda).abs() <= rel_tol * next.abs();
        lambda = next;
        if converged {
            break;
        }
    }
    lambda
}
