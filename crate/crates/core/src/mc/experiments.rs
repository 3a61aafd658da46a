//! Replicated experiments shared by the command-line runner and the tests.
//!
//! Replication `r` always draws from stream `r` of the master seed, and
//! results are reduced in replication order, so outputs do not depend on
//! thread scheduling.

use rand::{Rng, RngCore};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::blocks::Blocks;
use crate::denoiser::{denoise, QuerySet, SolverConfig};
use crate::error::{invalid, Error, Result};
use crate::optim::{run_optimizer, run_rng, warmstart_bench, RunSpec, Trajectory, WarmStartRow};
use crate::oracles::{GradientOracle, QuadraticObjective};

use super::accuracy::{bias_estimate, mse_from_squared_errors, BiasEstimate, MseReport};
use super::stats::{slope_through_origin, McEstimate};
use super::tightness::{p_active_empirical, p_active_theoretical, TightnessQuery};

/// Stream reserved for sampling fixed problem configurations.
pub const CONFIG_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightnessRow {
    pub dx: f64,
    pub delta_l: f64,
    pub p_theory: f64,
    pub p_hat: McEstimate,
}

/// Active-constraint probability on `f(x) = x²/2` over a `(Δx, ΔL)` grid.
pub fn tightness_grid(dxs: &[f64], delta_ls: &[f64], sigma: f64, n: usize, seed: u64) -> Result<Vec<TightnessRow>> {
    let cells: Vec<(f64, f64)> = delta_ls.iter().flat_map(|&dl| dxs.iter().map(move |&dx| (dx, dl))).collect();
    cells
        .par_iter()
        .enumerate()
        .map(|(c, &(dx, delta_l))| {
            let q = TightnessQuery::quadratic(dx, delta_l, sigma)?;
            let mut rng = run_rng(seed, c as u64);
            let p_hat = p_active_empirical(&q, n, &mut rng)?;
            Ok(TightnessRow { dx, delta_l, p_theory: p_active_theoretical(&q), p_hat })
        })
        .collect()
}

/// A fixed set of query points on a diagonal quadratic.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub objective: QuadraticObjective<f64>,
    pub points: Blocks<f64>,
    pub gradients: Blocks<f64>,
}

impl PointCloud {
    /// `k` points uniform in `[-half_width, half_width]^d` (or `k` copies of
    /// one such point), Hessian eigenvalues linearly spaced in `[lo, hi]`.
    pub fn sample(
        d: usize,
        k: usize,
        eig_lo: f64,
        eig_hi: f64,
        half_width: f64,
        coincident: bool,
        rng: &mut dyn RngCore,
    ) -> Result<Self> {
        if k == 0 {
            return Err(invalid("K", "need at least one point"));
        }
        if !(half_width >= 0.0 && half_width.is_finite()) {
            return Err(invalid("half_width", format!("must be non-negative, got {half_width}")));
        }
        let objective = QuadraticObjective::linspaced(d, eig_lo, eig_hi)?;
        let draw = |rng: &mut dyn RngCore| -> Vec<f64> {
            (0..d).map(|_| half_width * (2.0 * rng.random::<f64>() - 1.0)).collect()
        };
        let mut points = Blocks::zeros(0, d);
        let first = draw(rng);
        for i in 0..k {
            if coincident || i == 0 {
                points.push(&first)?;
            } else {
                points.push(&draw(rng))?;
            }
        }
        let mut gradients = Blocks::zeros(0, d);
        for x in points.iter() {
            gradients.push(&objective.gradient(x)?)?;
        }
        Ok(Self { objective, points, gradients })
    }

    pub fn len(&self) -> usize {
        self.points.count()
    }

    pub fn is_empty(&self) -> bool {
        self.points.count() == 0
    }

    /// The first `k` points with gradients `∇f + σ·w`.
    fn noisy_set(&self, k: usize, sigma: f64, w: &[f64], lipschitz: f64) -> Result<QuerySet<f64>> {
        let d = self.points.dim();
        let pts = self.points.as_slice()[..k * d].to_vec();
        let g: Vec<f64> = self.gradients.as_slice()[..k * d].iter().zip(w).map(|(t, z)| t + sigma * z).collect();
        QuerySet::new(Blocks::from_flat(pts, d)?, Blocks::from_flat(g, d)?, lipschitz)
    }
}

fn standard_normals(n: usize, rng: &mut dyn RngCore) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

fn squared_errors(theta: &Blocks<f64>, truth: &[f64], d: usize) -> Vec<f64> {
    theta
        .iter()
        .zip(truth.chunks_exact(d))
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MseSigmaConfig {
    pub d: usize,
    pub ks: Vec<usize>,
    pub sigma2: Vec<f64>,
    pub replications: usize,
    pub eig_lo: f64,
    pub eig_hi: f64,
    pub half_width: f64,
    /// Denoiser constant as a multiple of the true smoothness constant.
    pub lipschitz_factor: f64,
    pub solver: SolverConfig<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MseSigmaRow {
    pub sigma2: f64,
    pub k: usize,
    /// Squared error averaged over the `k` points of a replication.
    pub mse: McEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MseSigmaResult {
    pub rows: Vec<MseSigmaRow>,
    /// Through-origin slope of `mse` against `σ²`, per window length.
    pub slopes: Vec<(usize, f64)>,
    pub cloud: PointCloud,
}

/// Denoiser error as a function of the noise level, for nested windows over
/// one sampled configuration. Every `(σ², K)` cell of a replication reuses
/// the same standard normal draws.
pub fn mse_vs_sigma(cfg: &MseSigmaConfig, seed: u64) -> Result<MseSigmaResult> {
    let k_max = *cfg.ks.iter().max().ok_or(Error::Empty("window lengths"))?;
    if cfg.ks.contains(&0) {
        return Err(invalid("K", "window lengths must be positive"));
    }
    if cfg.sigma2.is_empty() {
        return Err(Error::Empty("noise levels"));
    }
    if let Some(bad) = cfg.sigma2.iter().find(|s| !(**s >= 0.0 && s.is_finite())) {
        return Err(invalid("sigma2", format!("must be non-negative, got {bad}")));
    }
    if cfg.replications < 2 {
        return Err(invalid("replications", "need at least two"));
    }
    let mut cfg_rng = run_rng(seed, CONFIG_STREAM);
    let cloud = PointCloud::sample(cfg.d, k_max, cfg.eig_lo, cfg.eig_hi, cfg.half_width, false, &mut cfg_rng)?;
    let lipschitz = cfg.lipschitz_factor * cloud.objective.lipschitz();
    let d = cfg.d;

    // samples[replication][sigma][k]
    let samples: Vec<Vec<Vec<f64>>> = (0..cfg.replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = run_rng(seed, r as u64);
            let w = standard_normals(k_max * d, &mut rng);
            cfg.sigma2
                .iter()
                .map(|&s2| {
                    cfg.ks
                        .iter()
                        .map(|&k| {
                            let q = cloud.noisy_set(k, s2.sqrt(), &w, lipschitz)?;
                            let theta = denoise(&q, &cfg.solver)?.theta;
                            let se = squared_errors(&theta, &cloud.gradients.as_slice()[..k * d], d);
                            Ok(se.iter().sum::<f64>() / k as f64)
                        })
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for (si, &s2) in cfg.sigma2.iter().enumerate() {
        for (ki, &k) in cfg.ks.iter().enumerate() {
            let xs: Vec<f64> = samples.iter().map(|r| r[si][ki]).collect();
            rows.push(MseSigmaRow { sigma2: s2, k, mse: McEstimate::from_samples(&xs)? });
        }
    }
    let slopes = cfg
        .ks
        .iter()
        .map(|&k| {
            let (xs, ys): (Vec<f64>, Vec<f64>) =
                rows.iter().filter(|r| r.k == k).map(|r| (r.sigma2, r.mse.mean)).unzip();
            Ok((k, slope_through_origin(&xs, &ys)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MseSigmaResult { rows, slopes, cloud })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementwiseConfig {
    pub d: usize,
    pub k: usize,
    pub sigma: f64,
    pub replications: usize,
    pub eig_lo: f64,
    pub eig_hi: f64,
    pub half_width: f64,
    pub lipschitz_factor: f64,
    /// Place every query at the same point.
    pub coincident: bool,
    pub solver: SolverConfig<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementwiseResult {
    pub denoised: MseReport,
    pub raw: MseReport,
    /// `d·σ²`, the raw oracle's per-point error.
    pub raw_theory: f64,
    pub denoised_bias: Vec<BiasEstimate>,
    pub raw_bias: Vec<BiasEstimate>,
    pub cloud: PointCloud,
}

/// Per-point error and bias of the denoiser next to the raw oracle.
pub fn mse_elementwise(cfg: &ElementwiseConfig, seed: u64) -> Result<ElementwiseResult> {
    if cfg.replications < 2 {
        return Err(invalid("replications", "need at least two"));
    }
    if !(cfg.sigma >= 0.0 && cfg.sigma.is_finite()) {
        return Err(invalid("sigma", format!("must be non-negative, got {}", cfg.sigma)));
    }
    let mut cfg_rng = run_rng(seed, CONFIG_STREAM);
    let cloud = PointCloud::sample(cfg.d, cfg.k, cfg.eig_lo, cfg.eig_hi, cfg.half_width, cfg.coincident, &mut cfg_rng)?;
    let lipschitz = cfg.lipschitz_factor * cloud.objective.lipschitz();
    let (k, d) = (cfg.k, cfg.d);

    let pairs: Vec<(Blocks<f64>, Blocks<f64>)> = (0..cfg.replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = run_rng(seed, r as u64);
            let w = standard_normals(k * d, &mut rng);
            let q = cloud.noisy_set(k, cfg.sigma, &w, lipschitz)?;
            let theta = denoise(&q, &cfg.solver)?.theta;
            Ok((theta, q.gradients().clone()))
        })
        .collect::<Result<Vec<_>>>()?;

    let truths = vec![cloud.gradients.clone(); cfg.replications];
    let (thetas, raws): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let sq = |est: &[Blocks<f64>]| -> Vec<Vec<f64>> {
        est.iter().map(|e| squared_errors(e, cloud.gradients.as_slice(), d)).collect()
    };
    Ok(ElementwiseResult {
        denoised: mse_from_squared_errors(&sq(&thetas))?,
        raw: mse_from_squared_errors(&sq(&raws))?,
        raw_theory: d as f64 * cfg.sigma * cfg.sigma,
        denoised_bias: bias_estimate(&thetas, &truths)?,
        raw_bias: bias_estimate(&raws, &truths)?,
        cloud,
    })
}

/// Independent runs `0..replications` of one optimizer configuration.
pub fn replicate_runs(
    oracle: &dyn GradientOracle<f64>,
    spec: &RunSpec<f64>,
    replications: usize,
    seed: u64,
) -> Result<Vec<Trajectory<f64>>> {
    (0..replications as u64).into_par_iter().map(|r| run_optimizer(oracle, spec, seed, r)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub calls: u64,
    pub distance: McEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    pub points: Vec<CurvePoint>,
    /// Runs stopped by the divergence guard; they drop out of later points.
    pub diverged: usize,
}

/// Mean distance to the optimum per record index across runs.
pub fn aggregate_curve(name: &str, runs: &[Trajectory<f64>]) -> Result<Curve> {
    let longest = runs.iter().map(|t| t.records.len()).max().ok_or(Error::Empty("runs"))?;
    let mut points = Vec::with_capacity(longest);
    for i in 0..longest {
        let present: Vec<_> = runs.iter().filter_map(|t| t.records.get(i)).collect();
        let calls = present[0].calls;
        let ds: Vec<f64> = present.iter().map(|r| r.distance).collect();
        points.push(CurvePoint { calls, distance: McEstimate::from_samples(&ds)? });
    }
    Ok(Curve { name: name.to_string(), points, diverged: runs.iter().filter(|t| t.diverged).count() })
}

/// Per-run mean of `‖x − x*‖` over records with index in `from..`, then the
/// Monte-Carlo estimate across runs.
pub fn tail_mean(runs: &[Trajectory<f64>], from: usize) -> Result<McEstimate> {
    let per_run: Vec<f64> = runs
        .iter()
        .filter_map(|t| {
            let tail = t.records.get(from..)?;
            (!tail.is_empty()).then(|| tail.iter().map(|r| r.distance).sum::<f64>() / tail.len() as f64)
        })
        .collect();
    McEstimate::from_samples(&per_run)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WarmStartStep {
    pub step: usize,
    pub cold: McEstimate,
    pub warm: McEstimate,
    /// Share of runs whose warm solve needed strictly fewer iterations.
    pub warm_faster: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WarmStartReport {
    pub steps: Vec<WarmStartStep>,
    pub runs: Vec<Vec<WarmStartRow<f64>>>,
}

impl WarmStartReport {
    /// Share of (run, step) solves after `burn_in` where the warm start won.
    pub fn warm_faster_share(&self, burn_in: usize) -> f64 {
        let rows: Vec<&WarmStartRow<f64>> = self.runs.iter().flatten().filter(|r| r.step >= burn_in).collect();
        let wins = rows.iter().filter(|r| r.warm_iterations < r.cold_iterations).count();
        wins as f64 / rows.len().max(1) as f64
    }

    /// Share of solves after `burn_in` whose warm initial dual gap is
    /// smaller than the cold one.
    pub fn closer_start_share(&self, burn_in: usize) -> f64 {
        let rows: Vec<&WarmStartRow<f64>> = self.runs.iter().flatten().filter(|r| r.step >= burn_in).collect();
        let wins = rows.iter().filter(|r| r.warm_start_gap < r.cold_start_gap).count();
        wins as f64 / rows.len().max(1) as f64
    }
}

#[allow(clippy::too_many_arguments)]
pub fn warmstart_report(
    oracle: &dyn GradientOracle<f64>,
    gamma: f64,
    window: usize,
    steps: usize,
    x0: &[f64],
    solver: SolverConfig<f64>,
    replications: usize,
    seed: u64,
) -> Result<WarmStartReport> {
    if replications == 0 {
        return Err(invalid("replications", "need at least one"));
    }
    let runs: Vec<Vec<WarmStartRow<f64>>> = (0..replications as u64)
        .into_par_iter()
        .map(|r| warmstart_bench(oracle, gamma, window, steps, x0, solver, seed, r))
        .collect::<Result<_>>()?;
    let n_rows = runs[0].len();
    let steps = (0..n_rows)
        .map(|i| {
            let rows: Vec<&WarmStartRow<f64>> = runs.iter().map(|r| &r[i]).collect();
            let cold: Vec<f64> = rows.iter().map(|r| r.cold_iterations as f64).collect();
            let warm: Vec<f64> = rows.iter().map(|r| r.warm_iterations as f64).collect();
            let wins = rows.iter().filter(|r| r.warm_iterations < r.cold_iterations).count();
            Ok(WarmStartStep {
                step: rows[0].step,
                cold: McEstimate::from_samples(&cold)?,
                warm: McEstimate::from_samples(&warm)?,
                warm_faster: wins as f64 / rows.len() as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WarmStartReport { steps, runs })
}
