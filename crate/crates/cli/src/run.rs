//! Experiment drivers: configuration in, result table out.

use coco_core::denoiser::{denoise, QuerySet};
use coco_core::mc::experiments::{
    aggregate_curve, mse_elementwise, mse_vs_sigma, replicate_runs, tightness_grid, warmstart_report, Curve,
    ElementwiseConfig, MseSigmaConfig, PointCloud, CONFIG_STREAM,
};
use coco_core::optim::{run_rng, AdamParams, CocoSpec, OptimizerSpec, RunSpec, StepSchedule};
use coco_core::oracles::{
    linspace, read_libsvm, GradientOracle, LogisticObjective, LogisticOracle, NoiseModel, QuadraticObjective,
    QuadraticOracle,
};
use coco_core::Error as CoreError;
use thiserror::Error;

use crate::config::{
    ConfigError, DenoiseOnce, ExperimentConfig, MseElementwise, MseVsSigma, Optimize, OptimizerKind, Params,
    ProblemKind, Schedule, Tightness, WarmstartBench,
};
use crate::svg::PlotSpec;
use crate::table::{Cell, ResultTable};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("data error: {0}")]
    Data(String),
    #[error("{0}")]
    Compute(CoreError),
    #[error("output error: {0}")]
    Output(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Data(_) => 3,
            RunError::Compute(_) | RunError::Output(_) => 1,
        }
    }
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter { name, reason } => {
                RunError::Config(ConfigError::Field { field: name.to_string(), reason })
            }
            e => RunError::Compute(e),
        }
    }
}

pub struct Output {
    pub table: ResultTable,
    pub plot: PlotSpec,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Output, RunError> {
    cfg.validate()?;
    match &cfg.params {
        Params::DenoiseOnce(p) => denoise_once(p, cfg.seed),
        Params::MseVsSigma(p) => mse_sigma(p, cfg.seed),
        Params::MseElementwise(p) => elementwise(p, cfg.seed),
        Params::Tightness(p) => tightness(p, cfg.seed),
        Params::Optimize(p) => optimize(p, cfg.seed),
        Params::WarmstartBench(p) => warmstart(p, cfg.seed),
    }
}

fn denoise_once(p: &DenoiseOnce, seed: u64) -> Result<Output, RunError> {
    let cloud = PointCloud::sample(
        p.d,
        p.k,
        p.eig_lo,
        p.eig_hi,
        p.half_width,
        p.coincident,
        &mut run_rng(seed, CONFIG_STREAM),
    )?;
    let mut noisy = cloud.gradients.clone();
    NoiseModel::new(p.sigma)?.perturb(noisy.as_mut_slice(), &mut run_rng(seed, 0));
    let lipschitz = p.lipschitz_factor * cloud.objective.lipschitz();
    let q = QuerySet::new(cloud.points.clone(), noisy.clone(), lipschitz)?;
    let r = denoise(&q, &p.solver.to_core())?;

    let mut t = ResultTable::new(&[
        ("point", ""),
        ("coord", ""),
        ("x", ""),
        ("grad_true", ""),
        ("grad_noisy", ""),
        ("theta", ""),
    ]);
    let sq = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
    t.note("lipschitz", format!("{lipschitz:?}"));
    t.note("iterations", r.iterations);
    t.note("converged", r.converged);
    t.note("feasibility", format!("{:?}", r.feasibility));
    t.note("sq_error_noisy", format!("{:?}", sq(noisy.as_slice(), cloud.gradients.as_slice())));
    t.note("sq_error_theta", format!("{:?}", sq(r.theta.as_slice(), cloud.gradients.as_slice())));
    for k in 0..p.k {
        for j in 0..p.d {
            t.push(vec![
                k.into(),
                j.into(),
                cloud.points.block(k)[j].into(),
                cloud.gradients.block(k)[j].into(),
                noisy.block(k)[j].into(),
                r.theta.block(k)[j].into(),
            ]);
        }
    }
    let plot = PlotSpec::new("denoised against true gradient coordinates", "grad_true", "theta").scatter();
    Ok(Output { table: t, plot })
}

fn mse_sigma(p: &MseVsSigma, seed: u64) -> Result<Output, RunError> {
    let mc = MseSigmaConfig {
        d: p.d,
        ks: p.ks.clone(),
        sigma2: p.sigma2.clone(),
        replications: p.replications,
        eig_lo: p.eig_lo,
        eig_hi: p.eig_hi,
        half_width: p.half_width,
        lipschitz_factor: p.lipschitz_factor,
        solver: p.solver.to_core(),
    };
    let r = mse_vs_sigma(&mc, seed)?;
    let mut t = ResultTable::new(&[("sigma2", ""), ("K", ""), ("mse_hat", ""), ("se", ""), ("slope", "")]);
    for row in &r.rows {
        let slope = r.slopes.iter().find(|(k, _)| *k == row.k).map_or(f64::NAN, |s| s.1);
        t.push(vec![row.sigma2.into(), row.k.into(), row.mse.mean.into(), row.mse.se.into(), slope.into()]);
    }
    let plot =
        PlotSpec::new("per-point MSE against noise variance", "sigma2", "mse_hat").with_se("se").with_series("K");
    Ok(Output { table: t, plot })
}

fn elementwise(p: &MseElementwise, seed: u64) -> Result<Output, RunError> {
    let mc = ElementwiseConfig {
        d: p.d,
        k: p.k,
        sigma: p.sigma,
        replications: p.replications,
        eig_lo: p.eig_lo,
        eig_hi: p.eig_hi,
        half_width: p.half_width,
        lipschitz_factor: p.lipschitz_factor,
        coincident: p.coincident,
        solver: p.solver.to_core(),
    };
    let r = mse_elementwise(&mc, seed)?;
    let mut t = ResultTable::new(&[
        ("point", ""),
        ("mse_coco", ""),
        ("se_coco", ""),
        ("mse_oracle_emp", ""),
        ("se_oracle", ""),
        ("mse_oracle_theory", ""),
        ("bias_coco", ""),
        ("bias_coco_se", ""),
    ]);
    t.note("stacked_mse_coco", format!("{:?} ± {:?}", r.denoised.stacked.mean, r.denoised.stacked.se));
    t.note("stacked_mse_oracle", format!("{:?} ± {:?}", r.raw.stacked.mean, r.raw.stacked.se));
    for k in 0..p.k {
        let (c, o, b) = (&r.denoised.per_point[k], &r.raw.per_point[k], &r.denoised_bias[k]);
        t.push(vec![
            k.into(),
            c.mean.into(),
            c.se.into(),
            o.mean.into(),
            o.se.into(),
            r.raw_theory.into(),
            b.norm.into(),
            b.se.into(),
        ]);
    }
    let plot = PlotSpec::new("per-point MSE of the denoised gradients", "point", "mse_coco").with_se("se_coco");
    Ok(Output { table: t, plot })
}

fn tightness(p: &Tightness, seed: u64) -> Result<Output, RunError> {
    let dxs = if p.dx_points == 1 { vec![0.0] } else { linspace(p.dx_points, 0.0, p.dx_max) };
    let rows = tightness_grid(&dxs, &p.delta_l, p.sigma, p.replications, seed)?;
    let mut t = ResultTable::new(&[("dx", ""), ("delta_l", ""), ("p_theory", ""), ("p_hat", ""), ("se", "")]);
    for r in rows {
        t.push(vec![r.dx.into(), r.delta_l.into(), r.p_theory.into(), r.p_hat.mean.into(), r.p_hat.se.into()]);
    }
    let plot =
        PlotSpec::new("probability that the constraint is active", "dx", "p_hat").with_se("se").with_series("delta_l");
    Ok(Output { table: t, plot })
}

fn quadratic_oracle(d: usize, lo: f64, hi: f64, sigma: f64) -> Result<QuadraticOracle<f64>, RunError> {
    Ok(QuadraticOracle::new(QuadraticObjective::linspaced(d, lo, hi)?, NoiseModel::new(sigma)?))
}

/// The oracle and, for a dataset, its content hash.
type BuiltOracle = (Box<dyn GradientOracle<f64>>, Option<String>);

fn build_oracle(p: &Optimize) -> Result<BuiltOracle, RunError> {
    match p.problem {
        ProblemKind::Quadratic => Ok((Box::new(quadratic_oracle(p.d, p.eig_lo, p.eig_hi, p.sigma)?), None)),
        ProblemKind::Logistic => {
            let path = p.dataset.as_deref().expect("validated");
            let data = read_libsvm::<f64>(path).map_err(|e| RunError::Data(format!("{}: {e}", path.display())))?;
            if data.is_empty() {
                return Err(RunError::Data(format!("{}: no examples", path.display())));
            }
            let lambda = p.lambda.expect("validated");
            let obj = LogisticObjective::new(data, lambda).map_err(|e| RunError::Data(e.to_string()))?;
            let oracle = LogisticOracle::new(obj).map_err(|e| RunError::Data(e.to_string()))?;
            let hash = oracle.dataset_hash().to_string();
            Ok((Box::new(oracle), Some(hash)))
        }
    }
}

fn optimize(p: &Optimize, seed: u64) -> Result<Output, RunError> {
    let (oracle, hash) = build_oracle(p)?;
    let schedule = match p.schedule {
        Schedule::Fixed => StepSchedule::Fixed(p.gamma),
        Schedule::Decreasing => StepSchedule::Decreasing(p.gamma),
    };
    let (base, name) = match p.optimizer {
        OptimizerKind::Sgd => (OptimizerSpec::Sgd(schedule), "sgd"),
        OptimizerKind::Adam => {
            (OptimizerSpec::Adam(AdamParams { gamma: p.gamma, beta1: p.beta1, beta2: p.beta2, eps: p.eps }), "adam")
        }
        OptimizerKind::Strsaga => (OptimizerSpec::Strsaga { gamma: p.gamma }, "strsaga"),
    };
    let solver = p.solver.to_core();
    let coco = |window| CocoSpec { window, solver, lipschitz: None };

    let mut series: Vec<(String, OptimizerSpec<f64>, Option<CocoSpec<f64>>)> = vec![(name.into(), base, None)];
    if p.pr_average {
        series.push((format!("{name}+pr"), OptimizerSpec::SgdAveraged(schedule), None));
    }
    for &k in &p.windows {
        series.push((format!("{name}+coco{k}"), base, Some(coco(Some(k)))));
    }
    if p.full_history {
        series.push((format!("{name}+coco-full"), base, Some(coco(None))));
    }

    let x0 = vec![p.x0; oracle.dim()];
    let mut curves: Vec<Curve> = Vec::with_capacity(series.len());
    for (label, optimizer, coco) in series {
        let spec = RunSpec { optimizer, coco, budget: p.budget, x0: x0.clone() };
        // Every series sees the same replication streams.
        let runs = replicate_runs(oracle.as_ref(), &spec, p.replications, seed)?;
        curves.push(aggregate_curve(&label, &runs)?);
    }

    let mut t =
        ResultTable::new(&[("series", ""), ("calls", "gradient evaluations"), ("mean_distance", ""), ("se", "")]);
    if let Some(h) = hash {
        t.note("dataset-sha256", h);
    }
    t.note("lipschitz", format!("{:?}", oracle.lipschitz()));
    for c in &curves {
        if c.diverged > 0 {
            t.note("diverged", format!("{} {}", c.name, c.diverged));
        }
        for pt in &c.points {
            t.push(vec![Cell::from(c.name.as_str()), pt.calls.into(), pt.distance.mean.into(), pt.distance.se.into()]);
        }
    }
    let plot = PlotSpec::new("distance to the minimizer", "calls", "mean_distance").with_se("se").with_series("series");
    Ok(Output { table: t, plot })
}

fn warmstart(p: &WarmstartBench, seed: u64) -> Result<Output, RunError> {
    let oracle = quadratic_oracle(p.d, p.eig_lo, p.eig_hi, p.sigma)?;
    let x0 = vec![p.x0; p.d];
    let r = warmstart_report(&oracle, p.gamma, p.k, p.steps, &x0, p.solver.to_core(), p.replications, seed)?;
    let mut t = ResultTable::new(&[("step", ""), ("start", ""), ("iterations", "solver iterations"), ("se", "")]);
    t.note("warm_faster_share", format!("{:?}", r.warm_faster_share(p.burn_in)));
    t.note("closer_start_share", format!("{:?}", r.closer_start_share(p.burn_in)));
    for (label, pick) in [("cold", 0), ("warm", 1)] {
        for s in &r.steps {
            let m = if pick == 0 { &s.cold } else { &s.warm };
            t.push(vec![s.step.into(), label.into(), m.mean.into(), m.se.into()]);
        }
    }
    let plot =
        PlotSpec::new("solver iterations per outer step", "step", "iterations").with_se("se").with_series("start");
    Ok(Output { table: t, plot })
}
