use crate::blocks::Blocks;
use crate::error::{invalid, Error, Result};
use crate::linalg::{dot, inf_dist, norm_sq};
use crate::scalar::Scalar;

/// Relative threshold below which two query points are treated as the same
/// point (infinity norm, scaled by `1 + max |coordinate|`).
pub const COINCIDENCE_RTOL: f64 = 1e-12;

/// `K` query points, their noisy gradients and the gradient Lipschitz
/// constant `L` of the objective.
#[derive(Debug, Clone, PartialEq)]
pub struct QuerySet<T> {
    points: Blocks<T>,
    gradients: Blocks<T>,
    lipschitz: T,
}

impl<T: Scalar> QuerySet<T> {
    pub fn new(points: Blocks<T>, gradients: Blocks<T>, lipschitz: T) -> Result<Self> {
        points.same_shape(&gradients)?;
        if points.count() == 0 {
            return Err(Error::Empty("query set"));
        }
        if !(lipschitz > T::zero()) || !lipschitz.is_finite() {
            return Err(Error::NonPositiveLipschitz(lipschitz.to_f64_lossy()));
        }
        Ok(Self { points, gradients, lipschitz })
    }

    pub fn from_rows<R: AsRef<[T]>>(points: &[R], gradients: &[R], lipschitz: T) -> Result<Self> {
        Self::new(Blocks::from_rows(points)?, Blocks::from_rows(gradients)?, lipschitz)
    }

    /// Number of query points `K`.
    pub fn len(&self) -> usize {
        self.points.count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    pub fn points(&self) -> &Blocks<T> {
        &self.points
    }

    pub fn gradients(&self) -> &Blocks<T> {
        &self.gradients
    }

    pub fn lipschitz(&self) -> T {
        self.lipschitz
    }

    pub fn point(&self, i: usize) -> &[T] {
        self.points.block(i)
    }

    pub fn gradient(&self, i: usize) -> &[T] {
        self.gradients.block(i)
    }

    fn coincidence_threshold(&self) -> T {
        let scale = self.points.as_slice().iter().fold(T::zero(), |m, &v| m.max(v.abs()));
        T::of(COINCIDENCE_RTOL) * (T::one() + scale)
    }

    /// First pair `(m, l)` of points closer than the coincidence threshold.
    pub fn find_coincident(&self) -> Option<(usize, usize)> {
        let tol = self.coincidence_threshold();
        let k = self.len();
        (0..k)
            .flat_map(|m| (m + 1..k).map(move |l| (m, l)))
            .find(|&(m, l)| inf_dist(self.point(m), self.point(l)) <= tol)
    }

    /// Merges coincident points.
    ///
    /// Each group of coincident points becomes one point (the first member's
    /// location) carrying the group mean gradient and a weight equal to the
    /// group size.
    pub fn coalesce(&self) -> Coalesced<T> {
        let tol = self.coincidence_threshold();
        let d = self.dim();
        let mut representatives: Vec<usize> = Vec::new();
        let mut group_of = Vec::with_capacity(self.len());
        let mut sums: Vec<Vec<T>> = Vec::new();
        let mut sizes: Vec<usize> = Vec::new();

        for i in 0..self.len() {
            let found = representatives.iter().position(|&r| inf_dist(self.point(r), self.point(i)) <= tol);
            let g = match found {
                Some(g) => g,
                None => {
                    representatives.push(i);
                    sums.push(vec![T::zero(); d]);
                    sizes.push(0);
                    representatives.len() - 1
                }
            };
            for (s, &v) in sums[g].iter_mut().zip(self.gradient(i)) {
                *s += v;
            }
            sizes[g] += 1;
            group_of.push(g);
        }

        let mut points = Blocks::zeros(0, d);
        let mut gradients = Blocks::zeros(0, d);
        for (g, &r) in representatives.iter().enumerate() {
            let n = T::of_usize(sizes[g]);
            let mean: Vec<T> = sums[g].iter().map(|&s| s / n).collect();
            points.push(self.point(r)).expect("same dimension");
            gradients.push(&mean).expect("same dimension");
        }
        let reduced = QuerySet { points, gradients, lipschitz: self.lipschitz };
        let weights = sizes.into_iter().map(T::of_usize).collect();
        Coalesced { reduced, weights, group_of, representatives }
    }
}

/// Result of [`QuerySet::coalesce`].
#[derive(Debug, Clone)]
pub struct Coalesced<T> {
    /// Distinct points with group-mean gradients.
    pub reduced: QuerySet<T>,
    /// Group sizes, one per reduced point.
    pub weights: Vec<T>,
    /// Reduced index of every original point.
    pub group_of: Vec<usize>,
    /// Original index of the first member of every group.
    pub representatives: Vec<usize>,
}

impl<T: Scalar> Coalesced<T> {
    pub fn is_trivial(&self) -> bool {
        self.representatives.len() == self.group_of.len()
    }

    /// Copies reduced estimates back to every original index.
    pub fn fan_out(&self, reduced_theta: &Blocks<T>) -> Blocks<T> {
        let mut out = Blocks::zeros(self.group_of.len(), reduced_theta.dim());
        for (i, &g) in self.group_of.iter().enumerate() {
            out.block_mut(i).copy_from_slice(reduced_theta.block(g));
        }
        out
    }
}

/// Largest violation of the pairwise co-coercivity constraints
/// `|θm − θl|² ≤ L ⟨θm − θl, xm − xl⟩`; zero iff `theta` is feasible.
pub fn feasibility_violation<T: Scalar>(theta: &Blocks<T>, q: &QuerySet<T>) -> Result<T> {
    theta.same_shape(q.gradients())?;
    let k = q.len();
    let l = q.lipschitz();
    let mut worst = T::zero();
    let d = q.dim();
    let mut dt = vec![T::zero(); d];
    let mut dx = vec![T::zero(); d];
    for m in 0..k {
        for n in m + 1..k {
            for j in 0..d {
                dt[j] = theta.block(m)[j] - theta.block(n)[j];
                dx[j] = q.point(m)[j] - q.point(n)[j];
            }
            worst = worst.max(norm_sq(&dt) - l * dot(&dt, &dx));
        }
    }
    Ok(worst)
}

pub(crate) fn check_lipschitz<T: Scalar>(l: T) -> Result<()> {
    if l > T::zero() && l.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveLipschitz(l.to_f64_lossy()))
    }
}

pub(crate) fn check_positive<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive and finite, got {v}")))
    }
}
