//! End-to-end acceptance checks. Runs as a plain binary so every criterion
//! reports one line in the test output.

use std::time::Instant;

use rand::{Rng, RngCore};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use coco_core::denoiser::{build_dual_problem, coco2_closed_form, denoise, fdpg_solve, QuerySet, SolverConfig};
use coco_core::linalg::{dist, inf_dist, norm};
use coco_core::mc::experiments::{
    mse_elementwise, mse_vs_sigma, replicate_runs, tail_mean, tightness_grid, warmstart_report, ElementwiseConfig,
    MseSigmaConfig,
};
use coco_core::mc::McEstimate;
use coco_core::optim::{run_rng, AdamParams, CocoSpec, OptimizerSpec, RunSpec, StepSchedule};
use coco_core::oracles::{linspace, NoiseModel, QuadraticObjective, QuadraticOracle};
use coco_core::Blocks;

type Outcome = Result<String, String>;

fn gaussian(n: usize, rng: &mut dyn RngCore) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// Random rotated quadratic with largest eigenvalue `l_real`, `k` points in
/// `[-3, 3]^d` and gradients `∇f + σ w`.
fn random_instance(
    k: usize,
    d: usize,
    l_real: f64,
    sigma: f64,
    rng: &mut dyn RngCore,
) -> (QuadraticObjective<f64>, Blocks<f64>, Blocks<f64>) {
    let mut eigs: Vec<f64> = (0..d).map(|_| l_real * (0.1 + 0.9 * rng.random::<f64>())).collect();
    eigs[0] = l_real;
    let f = QuadraticObjective::rotated(eigs, rng).unwrap();
    let mut pts = Blocks::zeros(0, d);
    let mut grads = Blocks::zeros(0, d);
    for _ in 0..k {
        let x: Vec<f64> = (0..d).map(|_| 6.0 * rng.random::<f64>() - 3.0).collect();
        let mut g = f.gradient(&x).unwrap();
        for (gi, w) in g.iter_mut().zip(gaussian(d, rng)) {
            *gi += sigma * w;
        }
        pts.push(&x).unwrap();
        grads.push(&g).unwrap();
    }
    (f, pts, grads)
}

/// `a ≥ b` up to `k` combined standard errors.
fn not_below(a: &McEstimate, b: &McEstimate, k: f64) -> bool {
    a.mean >= b.mean - k * a.se.hypot(b.se)
}

fn strictly_above(a: &McEstimate, b: &McEstimate, k: f64) -> bool {
    a.mean - b.mean > k * a.se.hypot(b.se)
}

fn closed_form_equivalence() -> Outcome {
    let dims = [1usize, 2, 3, 10];
    let cfg = SolverConfig::oracle_grade().with_max_iterations(10_000).with_tolerance(1e-10);
    let results: Vec<(f64, bool)> = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = run_rng(1, i);
            let d = dims[i as usize % dims.len()];
            let sigma = [0.05, 0.5, 2.0][i as usize % 3];
            let (_, pts, grads) = random_instance(2, d, 1.0, sigma, &mut rng);
            let q = QuerySet::new(pts, grads, 1.0).unwrap();
            let (t1, t2) = coco2_closed_form(q.point(0), q.point(1), q.gradient(0), q.gradient(1), 1.0).unwrap();
            let violated = t1 != q.gradient(0) || t2 != q.gradient(1);
            let r = fdpg_solve(&build_dual_problem(&q).unwrap(), &cfg, None).unwrap();
            let err = inf_dist(r.theta.block(0), &t1).max(inf_dist(r.theta.block(1), &t2));
            (err, violated)
        })
        .collect();
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let violated = results.iter().filter(|r| r.1).count();
    let detail =
        format!("max |fdpg - closed form|_inf = {worst:.2e} ({violated} violated, {} feasible)", 1000 - violated);
    if worst <= 1e-6 && violated > 0 && violated < 1000 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn centroid_preservation() -> Outcome {
    let cfg = SolverConfig::oracle_grade();
    let worst = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = run_rng(2, i);
            let k = 2 + (i as usize % 7);
            let d = 1 + (i as usize % 4);
            let (_, pts, grads) = random_instance(k, d, 1.0, 3.0, &mut rng);
            let q = QuerySet::new(pts, grads, 1.0).unwrap();
            let theta = denoise(&q, &cfg).unwrap().theta;
            let mg = q.gradients().centroid();
            dist(&theta.centroid(), &mg) / (1.0 + norm(&mg))
        })
        .reduce(|| 0.0, f64::max);
    let detail = format!("max relative centroid shift = {worst:.2e}");
    if worst <= 1e-8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn contraction() -> Outcome {
    let cfg = SolverConfig::oracle_grade().with_tolerance(1e-11);
    let worst = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = run_rng(3, i);
            let (f, pts, grads) = random_instance(4, 3, 1.0, 2.0, &mut rng);
            let l = [1.0, 1.5, 3.0][i as usize % 3];
            let q = QuerySet::new(pts, grads, l).unwrap();
            let theta = denoise(&q, &cfg).unwrap().theta;
            let mut truth = Blocks::zeros(0, 3);
            for x in q.points().iter() {
                truth.push(&f.gradient(x).unwrap()).unwrap();
            }
            dist(theta.as_slice(), truth.as_slice()) - dist(q.gradients().as_slice(), truth.as_slice())
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    let detail = format!("max (|theta - grad| - |g - grad|) = {worst:.2e} over 10^4 realizations");
    if worst <= 1e-6 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn tightness() -> Outcome {
    let dxs = linspace(21, 0.0, 200.0);
    let n = 100_000;
    let rows = tightness_grid(&dxs, &[-0.5, 0.0, 1.0], 10.0, n, 4).map_err(|e| e.to_string())?;
    let mut misses = Vec::new();
    for r in &rows {
        let floor = (r.p_theory * (1.0 - r.p_theory) / n as f64).sqrt();
        if (r.p_hat.mean - r.p_theory).abs() > 4.0 * r.p_hat.se.max(floor) {
            misses.push(format!("dx={} dL={}", r.dx, r.delta_l));
        }
    }
    let at = |dx: f64, dl: f64| rows.iter().find(|r| r.dx == dx && r.delta_l == dl).unwrap();
    let origin = [-0.5, 0.0, 1.0].iter().all(|&dl| at(0.0, dl).p_hat.mean == 1.0);
    let half = at(200.0, 0.0);
    let limit_half = (half.p_hat.mean - 0.5).abs() <= 4.0 * half.p_hat.se && (half.p_theory - 0.5).abs() < 1e-3;
    let limit_zero = at(200.0, 1.0).p_hat.mean < 1e-3;
    let detail = format!(
        "{} cells, {} outside 4 SE; p(0)=1: {origin}, dL=0 -> {:.4}, dL=1 -> {:.1e}",
        rows.len(),
        misses.len(),
        half.p_hat.mean,
        at(200.0, 1.0).p_hat.mean
    );
    if misses.is_empty() && origin && limit_half && limit_zero {
        Ok(detail)
    } else {
        Err(format!("{detail}; misses: {misses:?}"))
    }
}

fn averaging_recovery() -> Outcome {
    let cfg = ElementwiseConfig {
        d: 1,
        k: 2,
        sigma: 10.0,
        replications: 10_000,
        eig_lo: 1.0,
        eig_hi: 1.0,
        half_width: 5.0,
        lipschitz_factor: 1.0,
        coincident: true,
        solver: SolverConfig::oracle_grade(),
    };
    let r = mse_elementwise(&cfg, 5).map_err(|e| e.to_string())?;
    let points_ok = r.denoised.per_point.iter().all(|e| e.within(50.0, 4.0));
    let raw_ok = r.raw.stacked.within(200.0, 4.0);
    let detail = format!(
        "per-point MSE {:.2} / {:.2} (SE {:.2}, expect 50), stacked raw {:.1} (SE {:.1}, expect 200)",
        r.denoised.per_point[0].mean,
        r.denoised.per_point[1].mean,
        r.denoised.per_point[0].se,
        r.raw.stacked.mean,
        r.raw.stacked.se
    );
    if points_ok && raw_ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn slope_ordering() -> Outcome {
    let cfg = MseSigmaConfig {
        d: 3,
        ks: vec![1, 2, 4, 8, 10],
        sigma2: vec![1.0, 4.0, 16.0, 64.0, 256.0],
        replications: 1000,
        eig_lo: 1.0 / 3.0,
        eig_hi: 1.0,
        half_width: 5.0,
        lipschitz_factor: 1.0,
        solver: SolverConfig::oracle_grade().with_max_iterations(20_000),
    };
    let r = mse_vs_sigma(&cfg, 6).map_err(|e| e.to_string())?;
    let slopes: Vec<f64> = r.slopes.iter().map(|s| s.1).collect();
    let monotone = slopes.windows(2).all(|w| w[1] <= w[0]);
    let k1 = (slopes[0] - 3.0).abs() / 3.0;
    let detail = format!(
        "slopes {}; K=1 off by {:.1}%",
        r.slopes.iter().map(|(k, s)| format!("K={k}:{s:.3}")).collect::<Vec<_>>().join(" "),
        100.0 * k1
    );
    if monotone && k1 <= 0.05 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fig5_oracle() -> QuadraticOracle<f64> {
    let f = QuadraticObjective::linspaced(10, 1.0 / 3.0, 1.0).unwrap();
    QuadraticOracle::new(f, NoiseModel::new(10.0).unwrap())
}

fn window_ordering() -> Outcome {
    let oracle = fig5_oracle();
    let budget = 60;
    let x0 = vec![3.0; 10];
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, opt) in [
        ("SGD", OptimizerSpec::Sgd(StepSchedule::Fixed(0.5))),
        ("Adam", OptimizerSpec::Adam(AdamParams::with_gamma(0.05))),
    ] {
        let terminal: Vec<McEstimate> = [None, Some(2), Some(4), Some(8)]
            .iter()
            .map(|k| {
                let spec = RunSpec { optimizer: opt, coco: k.map(CocoSpec::window), budget, x0: x0.clone() };
                let runs = replicate_runs(&oracle, &spec, 100, 7).unwrap();
                tail_mean(&runs, budget).unwrap()
            })
            .collect();
        let ordered = terminal.windows(2).all(|w| not_below(&w[0], &w[1], 2.0));
        let separated = strictly_above(&terminal[0], &terminal[3], 2.0);
        ok &= ordered && separated;
        lines.push(format!(
            "{name}: {}",
            terminal.iter().map(|e| format!("{:.2}±{:.2}", e.mean, e.se)).collect::<Vec<_>>().join(" >= ")
        ));
    }
    let detail = lines.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn warm_start() -> Outcome {
    let f = QuadraticObjective::linspaced(10, 1.0 / 3.0, 1.0).unwrap();
    let oracle = QuadraticOracle::new(f, NoiseModel::new(0.1).unwrap());
    let solver = SolverConfig::oracle_grade().with_tolerance(1e-8);
    let report = warmstart_report(&oracle, 0.05, 8, 60, &[3.0; 10], solver, 16, 8).map_err(|e| e.to_string())?;
    let share = report.warm_faster_share(10);
    let rows: Vec<_> = report.runs.iter().flatten().filter(|r| r.step >= 10).collect();
    let cold = rows.iter().map(|r| r.cold_iterations as f64).sum::<f64>() / rows.len() as f64;
    let warm = rows.iter().map(|r| r.warm_iterations as f64).sum::<f64>() / rows.len() as f64;
    let detail = format!(
        "warm start strictly faster in {:.1}% of {} solves (mean iterations {cold:.0} cold, {warm:.0} warm); smaller initial dual gap in {:.1}%",
        100.0 * share,
        rows.len(),
        100.0 * report.closer_start_share(10)
    );
    if share >= 0.9 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn kkt_residual() -> Outcome {
    let cfg = SolverConfig::oracle_grade().with_max_iterations(100_000).with_tolerance(0.0);
    let stats: Vec<(f64, f64, bool)> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = run_rng(9, i);
            let (_, pts, grads) = random_instance(3, 2, 1.0, 3.0, &mut rng);
            let q = QuerySet::new(pts, grads, 1.0).unwrap();
            let r = fdpg_solve(&build_dual_problem(&q).unwrap(), &cfg, None).unwrap();
            let centroid = inf_dist(&r.theta.centroid(), &q.gradients().centroid());
            let descent = r.dual_trace.last().unwrap() <= r.dual_trace.first().unwrap();
            (r.feasibility, centroid, descent)
        })
        .collect();
    let feas = stats.iter().map(|s| s.0).fold(0.0, f64::max);
    let cent = stats.iter().map(|s| s.1).fold(0.0, f64::max);
    let descent = stats.iter().all(|s| s.2);
    let detail = format!("max feasibility {feas:.2e}, max centroid {cent:.2e}, dual descent {descent}");
    if feas <= 1e-8 && cent <= 1e-10 && descent {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn history_ordering() -> Outcome {
    let oracle = fig5_oracle();
    let budget = 30;
    let gamma = StepSchedule::Fixed(0.5);
    let x0 = vec![30.0; 10];
    let tail = |opt, coco| {
        let spec = RunSpec { optimizer: opt, coco, budget, x0: x0.clone() };
        tail_mean(&replicate_runs(&oracle, &spec, 100, 10).unwrap(), budget / 2).unwrap()
    };
    let coco = tail(OptimizerSpec::Sgd(gamma), Some(CocoSpec::full_history()));
    let averaged = tail(OptimizerSpec::SgdAveraged(gamma), None);
    let plain = tail(OptimizerSpec::Sgd(gamma), None);
    let detail = format!(
        "full-history {:.2}±{:.2} < averaged {:.2}±{:.2} < plain {:.2}±{:.2}",
        coco.mean, coco.se, averaged.mean, averaged.se, plain.mean, plain.se
    );
    if strictly_above(&averaged, &coco, 2.0) && strictly_above(&plain, &averaged, 2.0) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    let filter = std::env::args().nth(1).filter(|a| !a.starts_with('-'));
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 closed form vs FDPG", closed_form_equivalence),
        ("2 centroid", centroid_preservation),
        ("3 contraction", contraction),
        ("4 tightness probability", tightness),
        ("5 averaging at coincident points", averaging_recovery),
        ("6 MSE slope vs window", slope_ordering),
        ("7 window ordering SGD/Adam", window_ordering),
        ("8 warm start", warm_start),
        ("9 KKT residual", kkt_residual),
        ("10 full history vs averaging", history_ordering),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let selected = match filter.as_deref() {
            None => true,
            Some(f) if f.parse::<usize>().is_ok() => name.split(' ').next() == Some(f),
            Some(f) => name.contains(f),
        };
        if !selected {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({secs:.1}s) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({secs:.1}s) {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
