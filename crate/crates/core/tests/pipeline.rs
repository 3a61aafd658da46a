use coco_core::denoiser::{denoise, QuerySet, SolverConfig};
use coco_core::optim::{run_optimizer, AdamParams, CocoSpec, OptimizerSpec, RunSpec, StepSchedule};
use coco_core::oracles::{
    parse_libsvm, GradientOracle, LogisticObjective, LogisticOracle, NoiseModel, QuadraticObjective, QuadraticOracle,
};

fn small_logistic() -> LogisticOracle<f64> {
    let text = "\
# toy problem
+1 1:1.0 2:0.5
-1 1:-0.5 2:1.0
+1 1:0.2 2:-1.0 3:0.4
-1 3:2.0
+1 1:0.7 3:-0.3
-1 1:-1.2 2:0.1
+1 2:-0.4 3:-0.8
-1 1:0.3 2:1.5 3:0.9
";
    let obj = LogisticObjective::new(parse_libsvm(text).unwrap(), 0.1).unwrap();
    LogisticOracle::new(obj).unwrap()
}

#[test]
fn strsaga_with_denoising_reaches_the_minimizer() {
    let oracle = small_logistic();
    // Denoising treats per-example gradients as noisy full gradients, so the
    // wrapped run settles near the minimizer rather than on it.
    for (coco, factor) in [(None, 1e-3), (Some(CocoSpec::window(4)), 0.2)] {
        let spec = RunSpec {
            optimizer: OptimizerSpec::Strsaga { gamma: 0.5 },
            coco,
            budget: 400,
            x0: vec![1.0; oracle.dim()],
        };
        let run = run_optimizer(&oracle, &spec, 11, 0).unwrap();
        assert!(!run.diverged);
        let first = run.records[0].distance;
        let last = run.last_distance().unwrap();
        assert!(last < factor * first, "{coco:?}: {first} -> {last}");
        assert!(run.records.windows(2).all(|w| w[1].calls > w[0].calls));
    }
}

#[test]
fn adam_with_window_is_reproducible() {
    let obj = QuadraticObjective::linspaced(5, 0.2, 1.0).unwrap();
    let oracle = QuadraticOracle::new(obj, NoiseModel::new(1.0).unwrap());
    let spec = RunSpec {
        optimizer: OptimizerSpec::Adam(AdamParams::with_gamma(0.05)),
        coco: Some(CocoSpec::window(6)),
        budget: 80,
        x0: vec![2.0; 5],
    };
    let a = run_optimizer(&oracle, &spec, 3, 7).unwrap();
    let b = run_optimizer(&oracle, &spec, 3, 7).unwrap();
    assert_eq!(a, b);
    let c = run_optimizer(&oracle, &spec, 3, 8).unwrap();
    assert_ne!(a.records.last(), c.records.last());
}

#[test]
fn averaged_sgd_reports_mean_of_iterates() {
    let obj = QuadraticObjective::linspaced(2, 0.5, 1.0).unwrap();
    let oracle = QuadraticOracle::new(obj, NoiseModel::new(0.5).unwrap());
    let mk = |optimizer| RunSpec { optimizer, coco: None, budget: 50, x0: vec![1.0, -1.0] };
    let plain = run_optimizer(&oracle, &mk(OptimizerSpec::Sgd(StepSchedule::Fixed(0.3))), 5, 0).unwrap();
    let avg = run_optimizer(&oracle, &mk(OptimizerSpec::SgdAveraged(StepSchedule::Fixed(0.3))), 5, 0).unwrap();
    let n = plain.records.len() as f64;
    for j in 0..2 {
        let mean = plain.records.iter().map(|r| r.iterate[j]).sum::<f64>() / n;
        assert!((avg.records.last().unwrap().iterate[j] - mean).abs() < 1e-12);
    }
}

#[test]
fn single_precision_tracks_double() {
    let pts = [vec![0.0, 0.0], vec![1.0, 0.5], vec![-0.5, 1.0], vec![0.3, -0.7]];
    let grads = [vec![2.0, -1.0], vec![-1.5, 0.8], vec![0.4, 2.2], vec![1.1, -1.9]];
    let q64 = QuerySet::<f64>::from_rows(&pts, &grads, 1.0).unwrap();
    let to32 =
        |rows: &[Vec<f64>]| rows.iter().map(|r| r.iter().map(|&v| v as f32).collect()).collect::<Vec<Vec<f32>>>();
    let q32 = QuerySet::<f32>::from_rows(&to32(&pts), &to32(&grads), 1.0).unwrap();
    let t64 = denoise(&q64, &SolverConfig::oracle_grade().with_tolerance(1e-12)).unwrap().theta;
    let t32 = denoise(&q32, &SolverConfig::oracle_grade().with_tolerance(1e-6)).unwrap().theta;
    for (a, b) in t64.as_slice().iter().zip(t32.as_slice()) {
        assert!((a - f64::from(*b)).abs() < 1e-3, "{a} vs {b}");
    }
}
