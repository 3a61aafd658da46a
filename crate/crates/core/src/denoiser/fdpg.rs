//! Fast dual proximal gradient (FISTA on the dual) for the denoising QCQP.

use crate::blocks::Blocks;
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

use super::dual::DualProblem;
use super::query::feasibility_violation;

/// Iteration budget and stopping rule for [`fdpg_solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    /// Maximum number of iterations `T`.
    pub max_iterations: usize,
    /// Stop once `|s_k − s_{k−1}|_∞ ≤ tolerance`.
    pub tolerance: T,
    /// Initialize from the previous window's dual variable when available.
    pub warm_start: bool,
    /// Record the dual objective at every iteration instead of only at the
    /// start and the end.
    pub full_trace: bool,
}

impl<T: Scalar> SolverConfig<T> {
    /// Budget for use inside an optimizer loop.
    pub fn plug_in() -> Self {
        Self { max_iterations: 500, tolerance: T::of(1e-8), warm_start: true, full_trace: false }
    }

    /// Budget for reference-quality solves.
    pub fn oracle_grade() -> Self {
        Self { max_iterations: 100_000, tolerance: T::of(1e-8), warm_start: false, full_trace: false }
    }

    pub fn with_max_iterations(mut self, t: usize) -> Self {
        self.max_iterations = t;
        self
    }

    pub fn with_tolerance(mut self, tol: T) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn with_warm_start(mut self, on: bool) -> Self {
        self.warm_start = on;
        self
    }

    pub fn with_full_trace(mut self, on: bool) -> Self {
        self.full_trace = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(invalid("max_iterations", "must be at least 1"));
        }
        if !(self.tolerance >= T::zero()) {
            return Err(invalid("tolerance", "must be nonnegative"));
        }
        Ok(())
    }
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        Self::plug_in()
    }
}

/// Dual iterate, momentum iterate and momentum constant.
#[derive(Debug, Clone, PartialEq)]
pub struct DualState<T> {
    pub s: Blocks<T>,
    pub y: Blocks<T>,
    pub t: T,
    pub iteration: usize,
}

impl<T: Scalar> DualState<T> {
    pub fn zeros(pairs: usize, dim: usize) -> Self {
        Self::from_dual(Blocks::zeros(pairs, dim))
    }

    /// Starts from `s` with `y = s` and `t = 1`.
    pub fn from_dual(s: Blocks<T>) -> Self {
        Self { y: s.clone(), s, t: T::one(), iteration: 0 }
    }
}

/// Output of the denoiser.
#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseResult<T> {
    /// Estimated gradients, one block per query point.
    pub theta: Blocks<T>,
    /// Final dual state.
    pub state: DualState<T>,
    /// Dual objective at the initial iterate and at the final one; with
    /// [`SolverConfig::full_trace`] one entry per iteration after the first.
    pub dual_trace: Vec<T>,
    /// [`feasibility_violation`] of `theta`.
    pub feasibility: T,
    pub iterations: usize,
    /// Whether the stopping tolerance was met before the budget ran out.
    pub converged: bool,
}

/// Runs FDPG from `init` (or from zero) and recovers the primal estimate.
///
/// Exhausting the iteration budget is not an error; see
/// [`DenoiseResult::converged`].
pub fn fdpg_solve<T: Scalar>(
    problem: &DualProblem<T>,
    cfg: &SolverConfig<T>,
    init: Option<DualState<T>>,
) -> Result<DenoiseResult<T>> {
    cfg.validate()?;
    let (pairs, d) = (problem.pair_count(), problem.dim());
    let mut state = match init {
        Some(st) => {
            for b in [&st.s, &st.y] {
                if b.count() != pairs {
                    return Err(Error::BlockCount { expected: pairs, found: b.count() });
                }
                if b.dim() != d {
                    return Err(Error::DimensionMismatch { expected: d, found: b.dim() });
                }
            }
            if !(st.t >= T::one()) {
                return Err(invalid("t", "momentum constant must be at least 1"));
            }
            st
        }
        None => DualState::zeros(pairs, d),
    };

    let step = T::one() / problem.lipschitz();
    let mut ws = problem.workspace();
    let mut trace = Vec::with_capacity(if cfg.full_trace { cfg.max_iterations.min(4096) + 1 } else { 2 });
    trace.push(problem.objective_ws(&state.s, &mut ws));

    let mut next = Blocks::zeros(pairs, d);
    let mut iterations = 0;
    let mut converged = false;
    let (one, two, four) = (T::one(), T::of(2.0), T::of(4.0));

    while iterations < cfg.max_iterations {
        problem.prox_grad_step(&state.y, step, &mut ws, &mut next);
        let t_next = (one + (one + four * state.t * state.t).sqrt()) / two;
        let momentum = (state.t - one) / t_next;

        let mut change = T::zero();
        for ((y, &sn), &so) in state.y.as_mut_slice().iter_mut().zip(next.as_slice()).zip(state.s.as_slice()) {
            let delta = sn - so;
            change = change.max(delta.abs());
            *y = sn + momentum * delta;
        }
        std::mem::swap(&mut state.s, &mut next);
        state.t = t_next;
        state.iteration += 1;
        iterations += 1;
        if cfg.full_trace {
            trace.push(problem.objective_ws(&state.s, &mut ws));
        }

        if change <= cfg.tolerance {
            converged = true;
            break;
        }
    }

    if !cfg.full_trace && iterations > 0 {
        trace.push(problem.objective_ws(&state.s, &mut ws));
    }
    let theta = problem.recover_primal(&state.s)?;
    let feasibility = feasibility_violation(&theta, problem.query())?;
    Ok(DenoiseResult { theta, state, dual_trace: trace, feasibility, iterations, converged })
}

/// Optimality residual of a dual point: the larger of the primal
/// feasibility violation and the infinity norm of the proximal gradient
/// mapping `L (s − prox_{q*/L}(s − ∇/L))`.
pub fn kkt_residual<T: Scalar>(problem: &DualProblem<T>, s: &Blocks<T>) -> Result<T> {
    let theta = problem.recover_primal(s)?;
    let feas = feasibility_violation(&theta, problem.query())?;
    let lip = problem.lipschitz();
    let mut ws = problem.workspace();
    let mut mapped = Blocks::zeros(problem.pair_count(), problem.dim());
    problem.prox_grad_step(s, T::one() / lip, &mut ws, &mut mapped);
    let stationarity = s.max_abs_diff(&mapped) * lip;
    Ok(feas.max(stationarity))
}
