use rand::{Rng, RngCore};

use crate::error::{invalid, Error, Result};
use crate::linalg::axpy;
use crate::oracles::LogisticObjective;
use crate::scalar::Scalar;

/// Table operations per logical step.
pub const STRSAGA_RHO: usize = 2;

/// Streaming SAGA over a finite sum whose examples arrive one per step.
///
/// Each step first admits the next example from the arrival order (its table
/// entry starts at zero), then performs `STRSAGA_RHO` updates: the first on
/// the newly admitted example when there is one, the rest on uniformly drawn
/// admitted examples.
#[derive(Debug, Clone)]
pub struct StrsagaState<T> {
    pub x: Vec<T>,
    pub gamma: T,
    table: Vec<Option<Vec<T>>>,
    sum: Vec<T>,
    admitted: Vec<usize>,
    arrivals: Vec<usize>,
    next_arrival: usize,
}

impl<T: Scalar> StrsagaState<T> {
    /// `arrivals` is the order in which examples `0..n` become available.
    pub fn new(x0: Vec<T>, gamma: T, n: usize, arrivals: Vec<usize>) -> Result<Self> {
        if !(gamma > T::zero() && gamma.is_finite()) {
            return Err(invalid("gamma", format!("must be positive, got {gamma}")));
        }
        if let Some(&bad) = arrivals.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, len: n });
        }
        let d = x0.len();
        Ok(Self {
            x: x0,
            gamma,
            table: vec![None; n],
            sum: vec![T::zero(); d],
            admitted: Vec::new(),
            arrivals,
            next_arrival: 0,
        })
    }

    pub fn admitted(&self) -> usize {
        self.admitted.len()
    }

    pub fn table_sum(&self) -> &[T] {
        &self.sum
    }

    /// Sum of stored gradients recomputed from scratch.
    pub fn recomputed_sum(&self) -> Vec<T> {
        let mut s = vec![T::zero(); self.x.len()];
        for g in self.table.iter().flatten() {
            axpy(T::one(), g, &mut s);
        }
        s
    }

    /// One logical step. `grad(i, x)` supplies the gradient used for example
    /// `i` at `x`; it feeds both the update direction and the table.
    /// Returns the number of gradient evaluations performed.
    pub fn step<F>(&mut self, rng: &mut dyn RngCore, mut grad: F) -> Result<usize>
    where
        F: FnMut(usize, &[T]) -> Result<Vec<T>>,
    {
        let fresh = self.admit_next();
        if self.admitted.is_empty() {
            return Err(Error::NoArrivals);
        }
        for op in 0..STRSAGA_RHO {
            let i = match fresh {
                Some(i) if op == 0 => i,
                _ => self.admitted[rng.random_range(0..self.admitted.len())],
            };
            let g = grad(i, &self.x)?;
            if g.len() != self.x.len() {
                return Err(Error::DimensionMismatch { expected: self.x.len(), found: g.len() });
            }
            let inv_n = T::one() / T::of_usize(self.admitted.len());
            let old = self.table[i].take().expect("admitted example has a table entry");
            for j in 0..g.len() {
                let direction = g[j] - old[j] + self.sum[j] * inv_n;
                self.x[j] -= self.gamma * direction;
                self.sum[j] += g[j] - old[j];
            }
            self.table[i] = Some(g);
        }
        Ok(STRSAGA_RHO)
    }

    /// Step using exact per-example gradients of `obj`.
    pub fn step_objective(&mut self, obj: &LogisticObjective<T>, rng: &mut dyn RngCore) -> Result<usize> {
        self.step(rng, |i, x| obj.single_grad(i, x))
    }

    fn admit_next(&mut self) -> Option<usize> {
        while let Some(&i) = self.arrivals.get(self.next_arrival) {
            self.next_arrival += 1;
            if self.table[i].is_none() {
                self.table[i] = Some(vec![T::zero(); self.x.len()]);
                self.admitted.push(i);
                return Some(i);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::parse_libsvm;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn objective() -> LogisticObjective<f64> {
        let text = "+1 1:1 2:0.5\n-1 1:-0.5 2:1\n+1 1:0.2 2:-1 3:0.4\n-1 3:2\n+1 1:0.7 3:-0.3\n";
        LogisticObjective::new(parse_libsvm(text).unwrap(), 0.05).unwrap()
    }

    #[test]
    fn single_example_is_plain_sgd() {
        let f = objective();
        let mut st = StrsagaState::new(vec![0.1, 0.2, 0.3], 0.5, f.len(), vec![2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut x = st.x.clone();
        st.step_objective(&f, &mut rng).unwrap();
        for _ in 0..STRSAGA_RHO {
            let g = f.single_grad(2, &x).unwrap();
            axpy(-0.5, &g, &mut x);
        }
        for j in 0..3 {
            assert!((st.x[j] - x[j]).abs() < 1e-15);
        }
    }

    #[test]
    fn refreshed_table_steps_along_table_mean() {
        // With a gradient provider that ignores x, every table entry equals
        // the fresh gradient after its first visit.
        let grads = [vec![1.0, 0.0], vec![0.0, 2.0], vec![-1.0, 1.0]];
        let mut st = StrsagaState::new(vec![0.0, 0.0], 0.1, 3, vec![0, 1, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..3 {
            st.step(&mut rng, |i, _| Ok(grads[i].clone())).unwrap();
        }
        let x_before = st.x.clone();
        st.step(&mut rng, |i, _| Ok(grads[i].clone())).unwrap();
        let mean = [0.0, 1.0];
        for j in 0..2 {
            let moved = x_before[j] - st.x[j];
            assert!((moved - 0.1 * mean[j] * STRSAGA_RHO as f64).abs() < 1e-12, "{moved}");
        }
    }

    #[test]
    fn table_sum_bookkeeping() {
        let f = objective();
        let mut st = StrsagaState::new(vec![0.0; 3], 0.2, f.len(), vec![3, 0, 4, 1, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            st.step_objective(&f, &mut rng).unwrap();
        }
        assert_eq!(st.admitted(), 5);
        let re = st.recomputed_sum();
        for j in 0..3 {
            assert!((re[j] - st.table_sum()[j]).abs() <= 1e-9);
        }
    }

    #[test]
    fn errors() {
        let mut st = StrsagaState::<f64>::new(vec![0.0], 0.1, 2, vec![]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(st.step(&mut rng, |_, _| Ok(vec![0.0])), Err(Error::NoArrivals));
        assert!(StrsagaState::<f64>::new(vec![0.0], 0.1, 2, vec![2]).is_err());
        assert!(StrsagaState::<f64>::new(vec![0.0], 0.0, 2, vec![0]).is_err());
    }
}
