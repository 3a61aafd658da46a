//! First-order oracles: exact gradients, noisy gradients and sampled
//! example gradients.

mod libsvm;
mod logistic;
mod noise;
mod quadratic;

pub use libsvm::{parse_libsvm, read_libsvm, write_libsvm};
pub use logistic::{logistic_sigmoid, Dataset, LogisticObjective};
pub use noise::{noisy_query, NoiseModel, OracleSample};
pub use quadratic::{linspace, Hessian, QuadraticObjective};

use rand::{Rng, RngCore};

use crate::error::Result;
use crate::scalar::Scalar;

/// A stochastic first-order oracle over a known objective.
pub trait GradientOracle<T: Scalar>: Send + Sync {
    fn dim(&self) -> usize;

    /// Gradient Lipschitz constant handed to the denoiser.
    fn lipschitz(&self) -> T;

    fn true_grad(&self, x: &[T]) -> Result<Vec<T>>;

    /// One noisy gradient at `x`.
    fn query(&self, x: &[T], rng: &mut dyn RngCore) -> Result<OracleSample<T>>;

    fn minimizer(&self) -> &[T];

    /// Per-example access, for variance-reduced methods.
    fn finite_sum(&self) -> Option<&LogisticObjective<T>> {
        None
    }
}

/// Quadratic objective observed through additive Gaussian noise.
#[derive(Debug, Clone)]
pub struct QuadraticOracle<T> {
    objective: QuadraticObjective<T>,
    noise: NoiseModel<T>,
    minimizer: Vec<T>,
}

impl<T: Scalar> QuadraticOracle<T> {
    pub fn new(objective: QuadraticObjective<T>, noise: NoiseModel<T>) -> Self {
        let minimizer = objective.minimizer();
        Self { objective, noise, minimizer }
    }

    pub fn objective(&self) -> &QuadraticObjective<T> {
        &self.objective
    }

    pub fn noise(&self) -> &NoiseModel<T> {
        &self.noise
    }
}

impl<T: Scalar> GradientOracle<T> for QuadraticOracle<T> {
    fn dim(&self) -> usize {
        self.objective.dim()
    }

    fn lipschitz(&self) -> T {
        self.objective.lipschitz()
    }

    fn true_grad(&self, x: &[T]) -> Result<Vec<T>> {
        self.objective.gradient(x)
    }

    fn query(&self, x: &[T], rng: &mut dyn RngCore) -> Result<OracleSample<T>> {
        Ok(noisy_query(x, self.objective.gradient(x)?, &self.noise, rng))
    }

    fn minimizer(&self) -> &[T] {
        &self.minimizer
    }
}

/// Logistic regression where every query returns the gradient of one
/// uniformly sampled example.
#[derive(Debug, Clone)]
pub struct LogisticOracle<T> {
    objective: LogisticObjective<T>,
    minimizer: Vec<T>,
    dataset_hash: String,
}

/// Gradient-norm target for the reference minimizer.
pub const LOGISTIC_MINIMIZER_TOL: f64 = 1e-10;

impl<T: Scalar> LogisticOracle<T> {
    /// Computes the minimizer once by deterministic full-gradient descent.
    pub fn new(objective: LogisticObjective<T>) -> Result<Self> {
        let minimizer = objective.minimize(T::of(LOGISTIC_MINIMIZER_TOL), 2_000_000)?;
        let dataset_hash = objective.data().content_hash();
        Ok(Self { objective, minimizer, dataset_hash })
    }

    pub fn objective(&self) -> &LogisticObjective<T> {
        &self.objective
    }

    /// Hash of the dataset the cached minimizer belongs to.
    pub fn dataset_hash(&self) -> &str {
        &self.dataset_hash
    }
}

impl<T: Scalar> GradientOracle<T> for LogisticOracle<T> {
    fn dim(&self) -> usize {
        self.objective.dim()
    }

    fn lipschitz(&self) -> T {
        self.objective.lipschitz()
    }

    fn true_grad(&self, x: &[T]) -> Result<Vec<T>> {
        self.objective.full_grad(x)
    }

    fn query(&self, x: &[T], rng: &mut dyn RngCore) -> Result<OracleSample<T>> {
        let i = rng.random_range(0..self.objective.len());
        Ok(OracleSample { x: x.to_vec(), g: self.objective.single_grad(i, x)?, calls: 1 })
    }

    fn minimizer(&self) -> &[T] {
        &self.minimizer
    }

    fn finite_sum(&self) -> Option<&LogisticObjective<T>> {
        Some(&self.objective)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn oracle(sigma: f64) -> QuadraticOracle<f64> {
        let f = QuadraticObjective::from_eigenvalues(vec![1.0, 0.5, 0.25]).unwrap();
        QuadraticOracle::new(f, NoiseModel::new(sigma).unwrap())
    }

    #[test]
    fn noiseless_query_is_exact() {
        let o = oracle(0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = o.query(&[2.0, 2.0, 2.0], &mut rng).unwrap();
        assert_eq!(s.g, vec![2.0, 1.0, 0.5]);
        assert_eq!(s.calls, 1);
    }

    #[test]
    fn seeded_queries_reproduce() {
        let o = oracle(3.0);
        let a = o.query(&[1.0, 0.0, -1.0], &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = o.query(&[1.0, 0.0, -1.0], &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sample_mean_converges() {
        let sigma = 2.0;
        let o = oracle(sigma);
        let x = [1.0, -2.0, 4.0];
        let truth = o.true_grad(&x).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let n = 100_000;
        let mut mean = [0.0; 3];
        for _ in 0..n {
            let g = o.query(&x, &mut rng).unwrap().g;
            for j in 0..3 {
                mean[j] += g[j] / n as f64;
            }
        }
        for j in 0..3 {
            assert!((mean[j] - truth[j]).abs() <= 4.0 * sigma / (n as f64).sqrt());
        }
    }

    #[test]
    fn successive_noise_draws_uncorrelated() {
        let noise = NoiseModel::new(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 100_000;
        let mut prev = vec![0.0];
        noise.perturb(&mut prev, &mut rng);
        let (mut sxy, mut sxx, mut syy) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..n {
            let mut cur = vec![0.0];
            noise.perturb(&mut cur, &mut rng);
            sxy += prev[0] * cur[0];
            sxx += prev[0] * prev[0];
            syy += cur[0] * cur[0];
            prev = cur;
        }
        let corr: f64 = sxy / (sxx * syy).sqrt();
        assert!(corr.abs() <= 4.0 / (n as f64).sqrt(), "corr {corr}");
    }

    #[test]
    fn logistic_lipschitz_bounds_example_gradients() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let rows: Vec<Vec<f64>> = (0..20).map(|_| (0..3).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        let labels = (0..20).map(|i| if i % 3 == 0 { 1.0 } else { -1.0 }).collect();
        let data = Dataset::new(crate::Blocks::from_rows(&rows).unwrap(), labels).unwrap();
        let f = LogisticObjective::new(data, 0.01).unwrap();
        let l = f.lipschitz();
        for _ in 0..500 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
            let z: Vec<f64> = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
            for i in 0..f.len() {
                let gx = f.single_grad(i, &x).unwrap();
                let gz = f.single_grad(i, &z).unwrap();
                assert!(crate::linalg::dist(&gx, &gz) <= l * crate::linalg::dist(&x, &z) + 1e-12);
            }
        }
    }

    #[test]
    fn logistic_oracle_samples_examples() {
        let data = parse_libsvm::<f64>("+1 1:1 2:0.5\n-1 1:-0.5 2:1\n+1 1:0.2 2:-1\n").unwrap();
        let o = LogisticOracle::new(LogisticObjective::new(data, 0.1).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = o.finite_sum().unwrap();
        let x = [0.3, 0.1];
        for _ in 0..10 {
            let s = o.query(&x, &mut rng).unwrap();
            assert!((0..f.len()).any(|i| f.single_grad(i, &x).unwrap() == s.g));
        }
        assert!(crate::linalg::norm(&o.true_grad(o.minimizer()).unwrap()) <= 1e-10);
        assert_eq!(o.dataset_hash().len(), 64);
    }
}
