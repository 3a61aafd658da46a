use rand::{Rng, RngCore};
use rand_distr::StandardNormal;

use crate::blocks::Blocks;
use crate::error::{invalid, Error, Result};
use crate::linalg::{dot, norm, power_iteration};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum Hessian<T> {
    /// Diagonal matrix given by its entries (the eigenvalues).
    Diagonal(Vec<T>),
    /// Symmetric positive semidefinite matrix, one block per row.
    Dense(Blocks<T>),
}

/// `f(x) = ½ xᵀ A x`, minimized at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticObjective<T> {
    hessian: Hessian<T>,
    lipschitz: T,
}

impl<T: Scalar> QuadraticObjective<T> {
    /// Diagonal Hessian with the given nonnegative eigenvalues.
    pub fn from_eigenvalues(eigenvalues: Vec<T>) -> Result<Self> {
        let lipschitz = check_eigenvalues(&eigenvalues)?;
        Ok(Self { hessian: Hessian::Diagonal(eigenvalues), lipschitz })
    }

    /// Diagonal Hessian with `d` eigenvalues linearly spaced from `hi` down
    /// to `lo`.
    pub fn linspaced(d: usize, lo: T, hi: T) -> Result<Self> {
        Self::from_eigenvalues(linspace(d, hi, lo))
    }

    /// Explicit symmetric PSD Hessian. `L` is its largest eigenvalue, found by
    /// power iteration.
    pub fn from_matrix(rows: Blocks<T>) -> Result<Self> {
        let d = rows.dim();
        if rows.count() != d {
            return Err(Error::BlockCount { expected: d, found: rows.count() });
        }
        let scale = rows.as_slice().iter().fold(T::zero(), |m, &v| m.max(v.abs()));
        let tol = T::of(1e-12) * (T::one() + scale);
        for i in 0..d {
            for j in i + 1..d {
                if (rows.block(i)[j] - rows.block(j)[i]).abs() > tol {
                    return Err(invalid("hessian", format!("not symmetric at ({i}, {j})")));
                }
            }
        }
        let apply = |v: &[T], out: &mut [T]| {
            for (o, row) in out.iter_mut().zip(rows.iter()) {
                *o = dot(row, v);
            }
        };
        let top = power_iteration(d, apply, T::of(1e-12), 100_000);
        // Smallest eigenvalue via the shifted operator (top·I − A).
        let shifted = |v: &[T], out: &mut [T]| {
            for ((o, row), &vi) in out.iter_mut().zip(rows.iter()).zip(v) {
                *o = top * vi - dot(row, v);
            }
        };
        let min_eig = top - power_iteration(d, shifted, T::of(1e-12), 100_000);
        if min_eig < -T::of(1e-9) * (T::one() + top) {
            return Err(invalid("hessian", format!("not positive semidefinite (eigenvalue {min_eig})")));
        }
        Ok(Self { hessian: Hessian::Dense(rows), lipschitz: top })
    }

    /// `Q diag(eigenvalues) Qᵀ` for a random orthogonal `Q`.
    pub fn rotated(eigenvalues: Vec<T>, rng: &mut dyn RngCore) -> Result<Self> {
        let lipschitz = check_eigenvalues(&eigenvalues)?;
        let d = eigenvalues.len();
        let q = random_orthogonal::<T>(d, rng);
        let mut rows = Blocks::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                rows.block_mut(i)[j] = (0..d).map(|k| q.block(k)[i] * eigenvalues[k] * q.block(k)[j]).sum();
            }
        }
        Ok(Self { hessian: Hessian::Dense(rows), lipschitz })
    }

    pub fn dim(&self) -> usize {
        match &self.hessian {
            Hessian::Diagonal(e) => e.len(),
            Hessian::Dense(m) => m.dim(),
        }
    }

    pub fn hessian(&self) -> &Hessian<T> {
        &self.hessian
    }

    /// Largest Hessian eigenvalue.
    pub fn lipschitz(&self) -> T {
        self.lipschitz
    }

    pub fn minimizer(&self) -> Vec<T> {
        vec![T::zero(); self.dim()]
    }

    pub fn value(&self, x: &[T]) -> Result<T> {
        let g = self.gradient(x)?;
        Ok(dot(x, &g) / T::of(2.0))
    }

    /// `A x`
    pub fn gradient(&self, x: &[T]) -> Result<Vec<T>> {
        let d = self.dim();
        if x.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: x.len() });
        }
        Ok(match &self.hessian {
            Hessian::Diagonal(e) => e.iter().zip(x).map(|(&a, &b)| a * b).collect(),
            Hessian::Dense(m) => m.iter().map(|row| dot(row, x)).collect(),
        })
    }
}

fn check_eigenvalues<T: Scalar>(eigenvalues: &[T]) -> Result<T> {
    if eigenvalues.is_empty() {
        return Err(Error::Empty("eigenvalue list"));
    }
    if let Some(bad) = eigenvalues.iter().find(|&&e| !(e >= T::zero()) || !e.is_finite()) {
        return Err(invalid("eigenvalues", format!("must be finite and nonnegative, got {bad}")));
    }
    let top = eigenvalues.iter().fold(T::zero(), |m, &e| m.max(e));
    if top == T::zero() {
        return Err(invalid("eigenvalues", "at least one must be positive"));
    }
    Ok(top)
}

/// `n` values evenly spaced from `first` to `last` inclusive.
pub fn linspace<T: Scalar>(n: usize, first: T, last: T) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![first],
        _ => {
            let step = (last - first) / T::of_usize(n - 1);
            (0..n).map(|i| first + step * T::of_usize(i)).collect()
        }
    }
}

/// Rows form an orthonormal basis (Gram-Schmidt on Gaussian vectors).
fn random_orthogonal<T: Scalar>(d: usize, rng: &mut dyn RngCore) -> Blocks<T> {
    let mut q = Blocks::zeros(d, d);
    let mut i = 0;
    while i < d {
        let mut v: Vec<T> = (0..d).map(|_| T::of(rng.sample::<f64, _>(StandardNormal))).collect();
        for k in 0..i {
            let proj = dot(&v, q.block(k));
            for (vj, &qj) in v.iter_mut().zip(q.block(k)) {
                *vj -= proj * qj;
            }
        }
        let n = norm(&v);
        if n <= T::of(1e-8) {
            continue;
        }
        for (dst, &vj) in q.block_mut(i).iter_mut().zip(&v) {
            *dst = vj / n;
        }
        i += 1;
    }
    q
}
