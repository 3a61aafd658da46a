//! Co-coercivity gradient denoiser.
//!
//! Given noisy gradients `g_1..g_K` observed at points `x_1..x_K` of a convex
//! `L`-smooth function, the estimate is the projection of `g` onto the set of
//! gradient tuples satisfying `|θm − θl|² ≤ L ⟨θm − θl, xm − xl⟩` for every
//! pair. Two points have a closed form; larger sets are solved through the
//! dual with FDPG.

mod closed_form;
mod dual;
mod fdpg;
mod query;
mod warm_start;

pub use closed_form::coco2_closed_form;
pub use dual::{build_dual_problem, lipschitz_dual, pair_count, pair_index, pairs, DualProblem, PairConstraint};
pub use fdpg::{fdpg_solve, kkt_residual, DenoiseResult, DualState, SolverConfig};
pub use query::{feasibility_violation, Coalesced, QuerySet, COINCIDENCE_RTOL};
pub use warm_start::{warm_start_shift, PointId};

use crate::blocks::Blocks;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which path produced a [`WindowSolve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// Every point coalesced into one; the estimate is the mean gradient.
    Mean,
    /// Raw gradients already satisfy every constraint.
    Feasible,
    ClosedForm,
    Fdpg,
}

/// Denoised window together with what a later window needs to warm start.
#[derive(Debug, Clone)]
pub struct WindowSolve<T> {
    /// Estimates for every original point.
    pub theta: Blocks<T>,
    /// Solver output over the coalesced points.
    pub reduced: DenoiseResult<T>,
    /// Ids of the coalesced points, in solve order.
    pub ids: Vec<PointId>,
    pub method: SolveMethod,
}

/// Denoises a query set from a cold start.
///
/// Coincident points are merged before solving. `theta` and `feasibility`
/// refer to the original points; `state` and `dual_trace` to the merged
/// problem.
pub fn denoise<T: Scalar>(q: &QuerySet<T>, cfg: &SolverConfig<T>) -> Result<DenoiseResult<T>> {
    let ids: Vec<PointId> = (0..q.len() as PointId).collect();
    let cold = SolverConfig { warm_start: false, ..*cfg };
    let solve = denoise_window(q, &ids, &cold, None)?;
    let feasibility = feasibility_violation(&solve.theta, q)?;
    Ok(DenoiseResult { theta: solve.theta, feasibility, ..solve.reduced })
}

/// Denoises a window of identified points, warm starting from `prev` when
/// `cfg.warm_start` is set.
///
/// Uses the closed form when two (equally weighted) distinct points remain
/// after merging and FDPG otherwise.
pub fn denoise_window<T: Scalar>(
    q: &QuerySet<T>,
    ids: &[PointId],
    cfg: &SolverConfig<T>,
    prev: Option<&WindowSolve<T>>,
) -> Result<WindowSolve<T>> {
    if ids.len() != q.len() {
        return Err(Error::BlockCount { expected: q.len(), found: ids.len() });
    }
    cfg.validate()?;
    let merged = q.coalesce();
    let reduced_ids: Vec<PointId> = merged.representatives.iter().map(|&r| ids[r]).collect();
    let d = q.dim();
    let k = merged.reduced.len();

    if k == 1 {
        let theta = merged.reduced.gradients().clone();
        let reduced = DenoiseResult {
            theta: theta.clone(),
            state: DualState::zeros(0, d),
            dual_trace: vec![T::zero()],
            feasibility: T::zero(),
            iterations: 0,
            converged: true,
        };
        return Ok(WindowSolve { theta: merged.fan_out(&theta), reduced, ids: reduced_ids, method: SolveMethod::Mean });
    }

    let Coalesced { reduced: rq, weights, .. } = &merged;
    let problem = DualProblem::weighted(rq.clone(), weights.clone())?;

    if feasibility_violation(rq.gradients(), rq)? == T::zero() {
        let s = Blocks::zeros(problem.pair_count(), d);
        let reduced = DenoiseResult {
            theta: rq.gradients().clone(),
            dual_trace: vec![problem.dual_objective(&s)?],
            state: DualState::from_dual(s),
            feasibility: T::zero(),
            iterations: 0,
            converged: true,
        };
        return Ok(WindowSolve {
            theta: merged.fan_out(&reduced.theta),
            reduced,
            ids: reduced_ids,
            method: SolveMethod::Feasible,
        });
    }

    let (reduced, method) = if k == 2 && weights[0] == weights[1] {
        let (t1, t2) = coco2_closed_form(rq.point(0), rq.point(1), rq.gradient(0), rq.gradient(1), rq.lipschitz())?;
        // θ1 = g1 − s/w for the single pair.
        let w = weights[0];
        let s: Vec<T> = rq.gradient(0).iter().zip(&t1).map(|(&g, &t)| w * (g - t)).collect();
        let s = Blocks::from_flat(s, d)?;
        let theta = Blocks::from_rows(&[t1, t2])?;
        let result = DenoiseResult {
            feasibility: feasibility_violation(&theta, rq)?,
            dual_trace: vec![problem.dual_objective(&s)?],
            state: DualState::from_dual(s),
            theta,
            iterations: 0,
            converged: true,
        };
        (result, SolveMethod::ClosedForm)
    } else {
        let init = match prev {
            Some(p) if cfg.warm_start && p.reduced.state.s.dim() == d => {
                Some(warm_start_shift(Some((&p.reduced.state, &p.ids[..])), &reduced_ids, d)?)
            }
            _ => None,
        };
        (fdpg_solve(&problem, cfg, init)?, SolveMethod::Fdpg)
    };

    Ok(WindowSolve { theta: merged.fan_out(&reduced.theta), reduced, ids: reduced_ids, method })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coincident_pair_averages() {
        let q = QuerySet::<f64>::from_rows(&[vec![3.0], vec![3.0]], &[vec![1.0], vec![4.0]], 1.0).unwrap();
        let r = denoise(&q, &SolverConfig::plug_in()).unwrap();
        assert_eq!(r.theta.as_slice(), &[2.5, 2.5]);
        assert_eq!(r.feasibility, 0.0);
    }

    #[test]
    fn closed_form_path_exposes_dual() {
        let q = QuerySet::<f64>::from_rows(&[vec![1.0], vec![0.0]], &[vec![2.0], vec![0.0]], 1.0).unwrap();
        let w = denoise_window(&q, &[0, 1], &SolverConfig::plug_in(), None).unwrap();
        assert_eq!(w.method, SolveMethod::ClosedForm);
        assert_eq!(w.reduced.state.s.as_slice(), &[0.5]);
        let p = build_dual_problem(&q).unwrap();
        assert_eq!(p.recover_primal(&w.reduced.state.s).unwrap(), w.theta);
    }

    #[test]
    fn merged_groups_keep_weighted_centroid() {
        // Three observations at one point, one elsewhere: the merged problem is
        // weighted 3:1 and the overall centroid is preserved.
        let pts = vec![vec![0.0], vec![0.0], vec![1.0], vec![0.0]];
        let grads = vec![vec![4.0], vec![2.0], vec![-3.0], vec![3.0]];
        let q = QuerySet::<f64>::from_rows(&pts, &grads, 1.0).unwrap();
        let cfg = SolverConfig::oracle_grade().with_tolerance(1e-13);
        let r = denoise(&q, &cfg).unwrap();
        assert!((r.theta.centroid()[0] - q.gradients().centroid()[0]).abs() < 1e-9);
        assert!(r.feasibility <= 1e-9);
        assert_eq!(r.theta.block(0), r.theta.block(1));
        assert_eq!(r.theta.block(0), r.theta.block(3));
    }

    #[test]
    fn feasible_input_returned_verbatim() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0]];
        let grads = vec![vec![0.1, 0.2], vec![0.6, 0.1], vec![0.2, 1.1]];
        let q = QuerySet::<f64>::from_rows(&pts, &grads, 1.0).unwrap();
        let w = denoise_window(&q, &[4, 5, 6], &SolverConfig::plug_in(), None).unwrap();
        assert_eq!(w.method, SolveMethod::Feasible);
        assert_eq!(&w.theta, q.gradients());
    }

    #[test]
    fn ids_must_match() {
        let q = QuerySet::<f64>::from_rows(&[vec![1.0], vec![0.0]], &[vec![2.0], vec![0.0]], 1.0).unwrap();
        assert!(denoise_window(&q, &[0], &SolverConfig::plug_in(), None).is_err());
    }
}
