use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::denoiser::{denoise_window, PointId, SolverConfig, WindowSolve};
use crate::error::{invalid, Error, Result};
use crate::linalg::dist;
use crate::oracles::GradientOracle;
use crate::scalar::Scalar;

use super::adam::{AdamParams, AdamState};
use super::coco::CocoWindow;
use super::sgd::{PrAverage, SgdState, StepSchedule};
use super::strsaga::StrsagaState;

/// Base optimizer of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptimizerSpec<T> {
    Sgd(StepSchedule<T>),
    /// SGD whose reported iterate is the running mean of all iterates.
    SgdAveraged(StepSchedule<T>),
    Adam(AdamParams<T>),
    /// Needs a finite-sum oracle.
    Strsaga {
        gamma: T,
    },
}

impl<T: Scalar> OptimizerSpec<T> {
    pub fn validate(&self) -> Result<()> {
        match self {
            OptimizerSpec::Sgd(s) | OptimizerSpec::SgdAveraged(s) => s.validate(),
            OptimizerSpec::Adam(p) => p.validate(),
            OptimizerSpec::Strsaga { gamma } => {
                if *gamma > T::zero() && gamma.is_finite() {
                    Ok(())
                } else {
                    Err(invalid("gamma", format!("must be positive, got {gamma}")))
                }
            }
        }
    }
}

/// Gradient denoising in front of the optimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CocoSpec<T> {
    /// Window length; `None` keeps every past query.
    pub window: Option<usize>,
    pub solver: SolverConfig<T>,
    /// Constant handed to the denoiser; defaults to the oracle's.
    pub lipschitz: Option<T>,
}

impl<T: Scalar> CocoSpec<T> {
    pub fn window(k: usize) -> Self {
        Self { window: Some(k), solver: SolverConfig::plug_in(), lipschitz: None }
    }

    pub fn full_history() -> Self {
        Self { window: None, solver: SolverConfig::plug_in(), lipschitz: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec<T> {
    pub optimizer: OptimizerSpec<T>,
    pub coco: Option<CocoSpec<T>>,
    /// Number of optimizer steps.
    pub budget: usize,
    pub x0: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord<T> {
    /// Cumulative gradient evaluations.
    pub calls: u64,
    pub iterate: Vec<T>,
    /// `‖x − x*‖`.
    pub distance: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub records: Vec<TrajectoryRecord<T>>,
    pub seed: u64,
    pub run_index: u64,
    /// Set when a non-finite iterate stopped the run early.
    pub diverged: bool,
}

impl<T: Scalar> Trajectory<T> {
    pub fn last_distance(&self) -> Option<T> {
        self.records.last().map(|r| r.distance)
    }
}

/// The random stream of replication `run_index` under `seed`.
pub fn run_rng(seed: u64, run_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run_index);
    rng
}

enum Base<T> {
    Sgd(SgdState<T>, Option<PrAverage<T>>),
    Adam(AdamState<T>),
    Strsaga(StrsagaState<T>),
}

impl<T: Scalar> Base<T> {
    fn reported(&self) -> &[T] {
        match self {
            Base::Sgd(_, Some(avg)) => avg.mean(),
            Base::Sgd(st, None) => &st.x,
            Base::Adam(st) => &st.x,
            Base::Strsaga(st) => &st.x,
        }
    }
}

/// Runs query → optional denoise → step for `spec.budget` steps.
pub fn run_optimizer<T: Scalar>(
    oracle: &dyn GradientOracle<T>,
    spec: &RunSpec<T>,
    seed: u64,
    run_index: u64,
) -> Result<Trajectory<T>> {
    if spec.budget == 0 {
        return Err(invalid("budget", "must be at least 1"));
    }
    if spec.x0.len() != oracle.dim() {
        return Err(Error::DimensionMismatch { expected: oracle.dim(), found: spec.x0.len() });
    }
    spec.optimizer.validate()?;
    let mut rng = run_rng(seed, run_index);
    let mut window = match &spec.coco {
        Some(c) => Some(CocoWindow::new(c.window, c.lipschitz.unwrap_or(oracle.lipschitz()), c.solver)?),
        None => None,
    };

    let x0 = spec.x0.clone();
    let mut base = match spec.optimizer {
        OptimizerSpec::Sgd(s) => Base::Sgd(SgdState::new(x0, s)?, None),
        OptimizerSpec::SgdAveraged(s) => {
            let avg = PrAverage::new(&x0);
            Base::Sgd(SgdState::new(x0, s)?, Some(avg))
        }
        OptimizerSpec::Adam(p) => Base::Adam(AdamState::new(x0, p)?),
        OptimizerSpec::Strsaga { gamma } => {
            let n = oracle.finite_sum().ok_or(Error::NeedsFiniteSum("STRSAGA"))?.len();
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            Base::Strsaga(StrsagaState::new(x0, gamma, n, order)?)
        }
    };

    let x_star = oracle.minimizer();
    let mut records = Vec::with_capacity(spec.budget + 1);
    records.push(TrajectoryRecord { calls: 0, iterate: spec.x0.clone(), distance: dist(&spec.x0, x_star) });
    let mut calls = 0u64;
    let mut diverged = false;

    for _ in 0..spec.budget {
        match &mut base {
            Base::Sgd(st, avg) => {
                let g = query(oracle, &st.x, &mut rng, window.as_mut())?;
                calls += 1;
                st.step(&g)?;
                if let Some(avg) = avg {
                    avg.push(&st.x);
                }
            }
            Base::Adam(st) => {
                let g = query(oracle, &st.x, &mut rng, window.as_mut())?;
                calls += 1;
                st.step(&g)?;
            }
            Base::Strsaga(st) => {
                let obj = oracle.finite_sum().expect("checked above");
                let mut inner = run_rng(rng.next_u64(), 0);
                let used = st.step(&mut inner, |i, x| {
                    let g = obj.single_grad(i, x)?;
                    match window.as_mut() {
                        Some(w) => w.push(x, &g),
                        None => Ok(g),
                    }
                })?;
                calls += used as u64;
            }
        }
        let x = base.reported();
        let distance = dist(x, x_star);
        if !distance.is_finite() || x.iter().any(|v| !v.is_finite()) {
            diverged = true;
            break;
        }
        records.push(TrajectoryRecord { calls, iterate: x.to_vec(), distance });
    }

    Ok(Trajectory { records, seed, run_index, diverged })
}

fn query<T: Scalar>(
    oracle: &dyn GradientOracle<T>,
    x: &[T],
    rng: &mut dyn RngCore,
    window: Option<&mut CocoWindow<T>>,
) -> Result<Vec<T>> {
    let sample = oracle.query(x, rng)?;
    match window {
        Some(w) => w.push(&sample.x, &sample.g),
        None => Ok(sample.g),
    }
}

/// Cold and warm-started solves of the same window at one outer step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarmStartRow<T> {
    pub step: usize,
    pub points: usize,
    pub cold_iterations: usize,
    pub warm_iterations: usize,
    pub cold_converged: bool,
    pub warm_converged: bool,
    /// Dual objective at the initial iterate minus the best final value of
    /// the two solves.
    pub cold_start_gap: T,
    pub warm_start_gap: T,
}

/// Runs SGD driven by a sliding-window denoiser and, at every step, solves
/// the same window twice: from a zero dual and warm-started from the
/// previous window's solution. The trajectory follows the warm solve.
#[allow(clippy::too_many_arguments)]
pub fn warmstart_bench<T: Scalar>(
    oracle: &dyn GradientOracle<T>,
    gamma: T,
    window: usize,
    steps: usize,
    x0: &[T],
    solver: SolverConfig<T>,
    seed: u64,
    run_index: u64,
) -> Result<Vec<WarmStartRow<T>>> {
    if window < 2 {
        return Err(invalid("K", "warm-start comparison needs a window of at least 2"));
    }
    let mut rng = run_rng(seed, run_index);
    let mut sgd = SgdState::new(x0.to_vec(), StepSchedule::Fixed(gamma))?;
    let mut ring = CocoWindow::new(Some(window), oracle.lipschitz(), solver.with_warm_start(false))?;
    let warm_cfg = solver.with_warm_start(true);
    let mut prev: Option<WindowSolve<T>> = None;
    let mut rows = Vec::with_capacity(steps);

    for step in 0..steps {
        let sample = oracle.query(&sgd.x, &mut rng)?;
        let cold_theta = ring.push(&sample.x, &sample.g)?;
        let (q, ids): (_, Vec<PointId>) = ring.query_set()?;
        let g = if q.len() >= 2 {
            let cold = &ring.last_solve().expect("window holds two points").reduced;
            let warm = denoise_window(&q, &ids, &warm_cfg, prev.as_ref())?;
            let (ct, wt) = (&cold.dual_trace, &warm.reduced.dual_trace);
            let best = ct[ct.len() - 1].min(wt[wt.len() - 1]);
            rows.push(WarmStartRow {
                step,
                points: q.len(),
                cold_iterations: cold.iterations,
                warm_iterations: warm.reduced.iterations,
                cold_converged: cold.converged,
                warm_converged: warm.reduced.converged,
                cold_start_gap: ct[0] - best,
                warm_start_gap: wt[0] - best,
            });
            let theta = warm.theta.block(warm.theta.count() - 1).to_vec();
            prev = Some(warm);
            theta
        } else {
            cold_theta
        };
        sgd.step(&g)?;
        if sgd.x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NotConverged(format!("iterate diverged at step {step}")));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{NoiseModel, QuadraticObjective, QuadraticOracle};

    fn oracle(sigma: f64) -> QuadraticOracle<f64> {
        let f = QuadraticObjective::linspaced(4, 1.0 / 3.0, 1.0).unwrap();
        QuadraticOracle::new(f, NoiseModel::new(sigma).unwrap())
    }

    fn spec(opt: OptimizerSpec<f64>, coco: Option<CocoSpec<f64>>) -> RunSpec<f64> {
        RunSpec { optimizer: opt, coco, budget: 30, x0: vec![3.0, -2.0, 1.0, 5.0] }
    }

    #[test]
    fn noiseless_sgd_contracts() {
        let o = oracle(0.0);
        let t = run_optimizer(&o, &spec(OptimizerSpec::Sgd(StepSchedule::Fixed(1.5)), None), 1, 0).unwrap();
        assert_eq!(t.records.len(), 31);
        for w in t.records.windows(2) {
            assert!(w[1].distance < w[0].distance);
            assert_eq!(w[1].calls, w[0].calls + 1);
        }
    }

    #[test]
    fn deterministic_and_stream_separated() {
        let o = oracle(2.0);
        let s = spec(OptimizerSpec::Adam(AdamParams::with_gamma(0.1)), Some(CocoSpec::window(3)));
        let a = run_optimizer(&o, &s, 7, 2).unwrap();
        let b = run_optimizer(&o, &s, 7, 2).unwrap();
        assert_eq!(a, b);
        let c = run_optimizer(&o, &s, 7, 3).unwrap();
        assert_ne!(a.records, c.records);
    }

    #[test]
    fn unit_window_is_bit_identical() {
        let o = oracle(3.0);
        for opt in [
            OptimizerSpec::Sgd(StepSchedule::Fixed(0.3)),
            OptimizerSpec::SgdAveraged(StepSchedule::Decreasing(1.0)),
            OptimizerSpec::Adam(AdamParams::with_gamma(0.2)),
        ] {
            let plain = run_optimizer(&o, &spec(opt, None), 11, 0).unwrap();
            let wrapped = run_optimizer(&o, &spec(opt, Some(CocoSpec::window(1))), 11, 0).unwrap();
            assert_eq!(plain.records, wrapped.records);
        }
    }

    #[test]
    fn divergence_is_flagged() {
        let o = oracle(0.0);
        let mut s = spec(OptimizerSpec::Sgd(StepSchedule::Fixed(1e200)), None);
        s.budget = 10;
        let t = run_optimizer(&o, &s, 0, 0).unwrap();
        assert!(t.diverged);
        assert!(t.records.len() < 11);
        assert!(t.records.iter().all(|r| r.distance.is_finite()));
    }

    #[test]
    fn strsaga_needs_finite_sum() {
        let o = oracle(0.0);
        let s = spec(OptimizerSpec::Strsaga { gamma: 0.1 }, None);
        assert_eq!(run_optimizer(&o, &s, 0, 0), Err(Error::NeedsFiniteSum("STRSAGA")));
    }

    #[test]
    fn bench_rows_cover_steps() {
        let o = oracle(5.0);
        let rows = warmstart_bench(&o, 0.2, 4, 12, &[1.0, 1.0, 1.0, 1.0], SolverConfig::plug_in(), 3, 0).unwrap();
        assert_eq!(rows.len(), 11);
        assert_eq!(rows.last().unwrap().points, 4);
    }
}
