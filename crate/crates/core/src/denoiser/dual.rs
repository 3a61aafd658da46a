//! Dual of the denoising QCQP.
//!
//! With `α = θ − g`, the primal is `min ½ Σ w_k |α_k|²` subject to
//! `α_m − α_l + c_ml ∈ B(0, r_ml)` for every pair `m < l`. Writing
//! `(Aα)_ml = α_m − α_l`, the dual minimizes
//! `½ (Aᵀs)ᵀ W⁻¹ (Aᵀs) + Σ r_ml |s_ml| − s_mlᵀ c_ml` and the primal is
//! recovered as `θ = g − W⁻¹ Aᵀ s`. Unit weights give the plain problem;
//! other weights only arise from coalesced points.

use crate::blocks::Blocks;
use crate::error::{invalid, Error, Result};
use crate::linalg::{dot, norm};
use crate::scalar::Scalar;

use super::query::{check_positive, QuerySet};

/// Number of unordered pairs among `k` points.
pub fn pair_count(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Pairs `(m, l)`, `m < l`, in lexicographic order
/// `(0,1), (0,2), …, (0,k−1), (1,2), …, (k−2,k−1)`.
pub fn pairs(k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..k).flat_map(move |m| (m + 1..k).map(move |l| (m, l)))
}

/// Position of pair `(m, l)` in the lexicographic ordering over `k` points.
pub fn pair_index(m: usize, l: usize, k: usize) -> usize {
    debug_assert!(m < l && l < k);
    m * (2 * k - m - 1) / 2 + (l - m - 1)
}

/// Spectral norm squared of the pairwise-difference operator on `k` blocks.
///
/// `AᵀA` is the Laplacian of the complete graph on `k` nodes (times the
/// identity on each block), whose largest eigenvalue is `k`.
pub fn lipschitz_dual<T: Scalar>(k: usize) -> Result<T> {
    if k < 2 {
        return Err(invalid("k", format!("need at least two points, got {k}")));
    }
    Ok(T::of_usize(k))
}

/// Constraint data for the pair `(m, l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairConstraint<T> {
    pub m: usize,
    pub l: usize,
    /// `c_ml = (g_m − (L/2) x_m) − (g_l − (L/2) x_l)`
    pub center: Vec<T>,
    /// `r_ml = (L/2) |x_m − x_l|`
    pub radius: T,
}

#[derive(Debug, Clone)]
pub struct DualProblem<T> {
    query: QuerySet<T>,
    weights: Vec<T>,
    pairs: Vec<PairConstraint<T>>,
    lipschitz: T,
}

/// Builds the dual problem for distinct query points.
///
/// Coincident points violate strong duality and are rejected; merge them
/// first with [`QuerySet::coalesce`].
pub fn build_dual_problem<T: Scalar>(q: &QuerySet<T>) -> Result<DualProblem<T>> {
    DualProblem::weighted(q.clone(), vec![T::one(); q.len()])
}

impl<T: Scalar> DualProblem<T> {
    /// Dual problem with per-point weights on the primal objective.
    pub fn weighted(query: QuerySet<T>, weights: Vec<T>) -> Result<Self> {
        let k = query.len();
        if weights.len() != k {
            return Err(Error::BlockCount { expected: k, found: weights.len() });
        }
        for &w in &weights {
            check_positive("weight", w)?;
        }
        if let Some((m, l)) = query.find_coincident() {
            return Err(Error::CoincidentPoints(m, l));
        }
        let lip_a = lipschitz_dual::<T>(k)?;
        let w_min = weights.iter().fold(T::infinity(), |a, &b| a.min(b));
        let half_l = query.lipschitz() / T::of(2.0);
        let d = query.dim();
        let pairs = pairs(k)
            .map(|(m, l)| {
                let (xm, xl) = (query.point(m), query.point(l));
                let (gm, gl) = (query.gradient(m), query.gradient(l));
                let center = (0..d).map(|j| (gm[j] - half_l * xm[j]) - (gl[j] - half_l * xl[j])).collect();
                let dx: Vec<T> = xm.iter().zip(xl).map(|(&a, &b)| a - b).collect();
                PairConstraint { m, l, center, radius: half_l * norm(&dx) }
            })
            .collect();
        Ok(Self { query, weights, pairs, lipschitz: lip_a / w_min })
    }

    pub fn query(&self) -> &QuerySet<T> {
        &self.query
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn constraints(&self) -> &[PairConstraint<T>] {
        &self.pairs
    }

    /// Number of points `K`.
    pub fn points(&self) -> usize {
        self.query.len()
    }

    /// Number of pairs `K(K−1)/2`.
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn dim(&self) -> usize {
        self.query.dim()
    }

    /// Lipschitz constant of the smooth dual term's gradient. Equals
    /// `σ²_max(A)` for unit weights and upper-bounds the weighted operator
    /// norm otherwise.
    pub fn lipschitz(&self) -> T {
        self.lipschitz
    }

    fn check_dual(&self, s: &Blocks<T>) -> Result<()> {
        if s.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: s.dim() });
        }
        if s.count() != self.pair_count() {
            return Err(Error::BlockCount { expected: self.pair_count(), found: s.count() });
        }
        Ok(())
    }

    /// `−Aᵀs`: block `m` loses `s_ml`, block `l` gains it.
    pub fn neg_adjoint(&self, s: &Blocks<T>) -> Result<Blocks<T>> {
        self.check_dual(s)?;
        let mut out = Blocks::zeros(self.points(), self.dim());
        self.neg_adjoint_into(s, &mut out);
        Ok(out)
    }

    fn neg_adjoint_into(&self, s: &Blocks<T>, out: &mut Blocks<T>) {
        out.as_mut_slice().iter_mut().for_each(|v| *v = T::zero());
        for (p, c) in self.pairs.iter().enumerate() {
            let sp = s.block(p);
            for (j, &v) in sp.iter().enumerate() {
                out.block_mut(c.m)[j] -= v;
                out.block_mut(c.l)[j] += v;
            }
        }
    }

    /// Gradient of the smooth dual term, `A W⁻¹ Aᵀ s`, computed matrix-free in
    /// `O(K² d)`.
    pub fn dual_gradient(&self, s: &Blocks<T>) -> Result<Blocks<T>> {
        self.check_dual(s)?;
        let mut alpha = Blocks::zeros(self.points(), self.dim());
        let mut out = Blocks::zeros(self.pair_count(), self.dim());
        self.dual_gradient_into(s, &mut alpha, &mut out);
        Ok(out)
    }

    fn dual_gradient_into(&self, s: &Blocks<T>, alpha: &mut Blocks<T>, out: &mut Blocks<T>) {
        self.neg_adjoint_into(s, alpha);
        for (k, &w) in self.weights.iter().enumerate() {
            if w != T::one() {
                alpha.block_mut(k).iter_mut().for_each(|v| *v /= w);
            }
        }
        for (p, c) in self.pairs.iter().enumerate() {
            let (am, al) = (alpha.block(c.m), alpha.block(c.l));
            for (j, o) in out.block_mut(p).iter_mut().enumerate() {
                *o = al[j] - am[j];
            }
        }
    }

    /// Proximal map of `μ q*`: per pair, `s − μ (v − c)` where `v` projects
    /// `c + s/μ` onto the ball of radius `r`.
    pub fn prox_q_star(&self, s: &Blocks<T>, mu: T) -> Result<Blocks<T>> {
        self.check_dual(s)?;
        check_positive("mu", mu)?;
        let mut out = s.clone();
        self.prox_in_place(&mut out, mu);
        Ok(out)
    }

    fn prox_in_place(&self, s: &mut Blocks<T>, mu: T) {
        let d = self.dim();
        let mut z = vec![T::zero(); d];
        for (p, c) in self.pairs.iter().enumerate() {
            let block = s.block_mut(p);
            for j in 0..d {
                z[j] = c.center[j] + block[j] / mu;
            }
            let nz = norm(&z);
            let shrink = if nz > c.radius { c.radius / nz } else { T::one() };
            for j in 0..d {
                let v = z[j] * shrink;
                block[j] -= mu * (v - c.center[j]);
            }
        }
    }

    /// `θ = g − W⁻¹ Aᵀ s`.
    pub fn recover_primal(&self, s: &Blocks<T>) -> Result<Blocks<T>> {
        let mut theta = self.neg_adjoint(s)?;
        for (k, &w) in self.weights.iter().enumerate() {
            let g = self.query.gradient(k);
            for (t, &gj) in theta.block_mut(k).iter_mut().zip(g) {
                *t = gj + *t / w;
            }
        }
        Ok(theta)
    }

    /// `½ (Aᵀs)ᵀ W⁻¹ (Aᵀs) + Σ r_ml |s_ml| − s_mlᵀ c_ml`.
    pub fn dual_objective(&self, s: &Blocks<T>) -> Result<T> {
        let u = self.neg_adjoint(s)?;
        Ok(self.objective_with(s, &u))
    }

    fn objective_with(&self, s: &Blocks<T>, neg_adj: &Blocks<T>) -> T {
        let half = T::of(0.5);
        let smooth = neg_adj.iter().zip(&self.weights).map(|(b, &w)| dot(b, b) / w).sum::<T>() * half;
        let nonsmooth = self
            .pairs
            .iter()
            .enumerate()
            .map(|(p, c)| {
                let sp = s.block(p);
                c.radius * norm(sp) - dot(sp, &c.center)
            })
            .sum::<T>();
        smooth + nonsmooth
    }

    /// Scratch-buffer variant used by the solver loop.
    pub(crate) fn workspace(&self) -> Workspace<T> {
        Workspace {
            alpha: Blocks::zeros(self.points(), self.dim()),
            grad: Blocks::zeros(self.pair_count(), self.dim()),
        }
    }

    /// One proximal gradient step from `y` into `out`.
    pub(crate) fn prox_grad_step(&self, y: &Blocks<T>, step: T, ws: &mut Workspace<T>, out: &mut Blocks<T>) {
        self.dual_gradient_into(y, &mut ws.alpha, &mut ws.grad);
        for ((o, &yv), &gv) in out.as_mut_slice().iter_mut().zip(y.as_slice()).zip(ws.grad.as_slice()) {
            *o = yv - step * gv;
        }
        self.prox_in_place(out, step);
    }

    pub(crate) fn objective_ws(&self, s: &Blocks<T>, ws: &mut Workspace<T>) -> T {
        self.neg_adjoint_into(s, &mut ws.alpha);
        self.objective_with(s, &ws.alpha)
    }
}

pub(crate) struct Workspace<T> {
    alpha: Blocks<T>,
    grad: Blocks<T>,
}
