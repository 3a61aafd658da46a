use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocks::Blocks;
use crate::error::{Error, Result};
use crate::linalg::norm;

use super::stats::{compensated_sum, McEstimate};

/// Mean squared error of a block estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct MseReport {
    /// `E‖θ̂_k − ∇f(x_k)‖²` for every point.
    pub per_point: Vec<McEstimate>,
    /// `E Σ_k ‖θ̂_k − ∇f(x_k)‖²`.
    pub stacked: McEstimate,
    /// Stacked error divided by the number of points.
    pub point_average: McEstimate,
}

/// Builds a report from squared errors laid out as `[replication][point]`.
pub fn mse_from_squared_errors(rows: &[Vec<f64>]) -> Result<MseReport> {
    let k = rows.first().ok_or(Error::Empty("replications"))?.len();
    if k == 0 {
        return Err(Error::Empty("points"));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != k) {
        return Err(Error::BlockCount { expected: k, found: bad.len() });
    }
    let per_point = (0..k)
        .map(|j| McEstimate::from_samples(&rows.iter().map(|r| r[j]).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let totals: Vec<f64> = rows.iter().map(|r| compensated_sum(r.iter().copied())).collect();
    let stacked = McEstimate::from_samples(&totals)?;
    let averages: Vec<f64> = totals.iter().map(|t| t / k as f64).collect();
    Ok(MseReport { per_point, stacked, point_average: McEstimate::from_samples(&averages)? })
}

fn check_matched(estimates: &[Blocks<f64>], truths: &[Blocks<f64>]) -> Result<()> {
    if estimates.len() != truths.len() {
        return Err(Error::BlockCount { expected: estimates.len(), found: truths.len() });
    }
    if estimates.is_empty() {
        return Err(Error::Empty("replications"));
    }
    for (e, t) in estimates.iter().zip(truths) {
        e.same_shape(t)?;
        estimates[0].same_shape(e)?;
    }
    Ok(())
}

/// Squared-error statistics of per-replication estimates against truths.
pub fn mse_estimate(estimates: &[Blocks<f64>], truths: &[Blocks<f64>]) -> Result<MseReport> {
    check_matched(estimates, truths)?;
    let rows: Vec<Vec<f64>> = estimates
        .iter()
        .zip(truths)
        .map(|(e, t)| {
            e.iter().zip(t.iter()).map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()).collect()
        })
        .collect();
    mse_from_squared_errors(&rows)
}

/// Norm of the mean error at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasEstimate {
    /// `‖mean(θ̂_k − ∇f(x_k))‖`.
    pub norm: f64,
    /// Bootstrap standard error of `norm`.
    pub se: f64,
    /// `√Σ_j se_j²` over the coordinates of the mean error.
    pub mean_se: f64,
}

pub const BOOTSTRAP_RESAMPLES: usize = 200;
const BOOTSTRAP_SEED: u64 = 0x5eed_b007;

/// Bias norms per point with bootstrap standard errors.
pub fn bias_estimate(estimates: &[Blocks<f64>], truths: &[Blocks<f64>]) -> Result<Vec<BiasEstimate>> {
    bias_estimate_with(estimates, truths, BOOTSTRAP_RESAMPLES, BOOTSTRAP_SEED)
}

pub fn bias_estimate_with(
    estimates: &[Blocks<f64>],
    truths: &[Blocks<f64>],
    resamples: usize,
    seed: u64,
) -> Result<Vec<BiasEstimate>> {
    check_matched(estimates, truths)?;
    let n = estimates.len();
    let (k, d) = (estimates[0].count(), estimates[0].dim());
    // errors[point][coordinate][replication]
    let errors: Vec<Vec<Vec<f64>>> = (0..k)
        .map(|p| {
            (0..d).map(|j| estimates.iter().zip(truths).map(|(e, t)| e.block(p)[j] - t.block(p)[j]).collect()).collect()
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<Vec<usize>> = (0..resamples).map(|_| (0..n).map(|_| rng.random_range(0..n)).collect()).collect();

    errors
        .iter()
        .map(|coords| {
            let stats = coords.iter().map(|c| McEstimate::from_samples(c)).collect::<Result<Vec<_>>>()?;
            let mean: Vec<f64> = stats.iter().map(|s| s.mean).collect();
            let mean_se = stats.iter().map(|s| s.se * s.se).sum::<f64>().sqrt();
            let boot: Vec<f64> = draws
                .iter()
                .map(|idx| {
                    let m: Vec<f64> =
                        coords.iter().map(|c| compensated_sum(idx.iter().map(|&i| c[i])) / n as f64).collect();
                    norm(&m)
                })
                .collect();
            let se = if resamples >= 2 {
                let b = McEstimate::from_samples(&boot)?;
                b.se * (b.n as f64).sqrt()
            } else {
                0.0
            };
            Ok(BiasEstimate { norm: norm(&mean), se, mean_se })
        })
        .collect()
}
