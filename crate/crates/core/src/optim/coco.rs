use std::collections::VecDeque;

use crate::blocks::Blocks;
use crate::denoiser::{denoise_window, PointId, QuerySet, SolveMethod, SolverConfig, WindowSolve};
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Outcome of the most recent window solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowStats<T> {
    pub points: usize,
    pub method: SolveMethod,
    pub iterations: usize,
    pub feasibility: T,
}

/// Sliding window of the last `K` (point, noisy gradient) pairs, denoised
/// jointly on every push. `capacity = None` keeps the full history.
#[derive(Debug, Clone)]
pub struct CocoWindow<T> {
    capacity: Option<usize>,
    lipschitz: T,
    config: SolverConfig<T>,
    ring: VecDeque<(PointId, Vec<T>, Vec<T>)>,
    next_id: PointId,
    prev: Option<WindowSolve<T>>,
    last: Option<WindowStats<T>>,
}

impl<T: Scalar> CocoWindow<T> {
    pub fn new(capacity: Option<usize>, lipschitz: T, config: SolverConfig<T>) -> Result<Self> {
        if capacity == Some(0) {
            return Err(invalid("K", "window length must be at least 1"));
        }
        if !(lipschitz > T::zero() && lipschitz.is_finite()) {
            return Err(Error::NonPositiveLipschitz(lipschitz.to_f64_lossy()));
        }
        config.validate()?;
        Ok(Self { capacity, lipschitz, config, ring: VecDeque::new(), next_id: 0, prev: None, last: None })
    }

    pub fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }

    pub fn config(&self) -> &SolverConfig<T> {
        &self.config
    }

    pub fn last_stats(&self) -> Option<&WindowStats<T>> {
        self.last.as_ref()
    }

    pub fn last_solve(&self) -> Option<&WindowSolve<T>> {
        self.prev.as_ref()
    }

    /// Current window as a query set, oldest point first.
    pub fn query_set(&self) -> Result<(QuerySet<T>, Vec<PointId>)> {
        let d = self.ring.front().map_or(0, |e| e.1.len());
        let mut points = Blocks::zeros(0, d);
        let mut grads = Blocks::zeros(0, d);
        let mut ids = Vec::with_capacity(self.ring.len());
        for (id, x, g) in &self.ring {
            points.push(x)?;
            grads.push(g)?;
            ids.push(*id);
        }
        Ok((QuerySet::new(points, grads, self.lipschitz)?, ids))
    }

    /// Adds a pair, evicting the oldest when full, and returns the denoised
    /// gradient at the newest point.
    pub fn push(&mut self, x: &[T], g: &[T]) -> Result<Vec<T>> {
        if x.len() != g.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: g.len() });
        }
        if let Some((_, x0, _)) = self.ring.front() {
            if x0.len() != x.len() {
                return Err(Error::DimensionMismatch { expected: x0.len(), found: x.len() });
            }
        }
        if self.capacity.is_some_and(|k| self.ring.len() == k) {
            self.ring.pop_front();
        }
        self.ring.push_back((self.next_id, x.to_vec(), g.to_vec()));
        self.next_id += 1;

        if self.ring.len() == 1 {
            self.prev = None;
            self.last =
                Some(WindowStats { points: 1, method: SolveMethod::Mean, iterations: 0, feasibility: T::zero() });
            return Ok(g.to_vec());
        }

        let (q, ids) = self.query_set()?;
        let solve = denoise_window(&q, &ids, &self.config, self.prev.as_ref())?;
        let newest = solve.theta.block(solve.theta.count() - 1).to_vec();
        self.last = Some(WindowStats {
            points: q.len(),
            method: solve.method,
            iterations: solve.reduced.iterations,
            feasibility: solve.reduced.feasibility,
        });
        self.prev = Some(solve);
        Ok(newest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(k: Option<usize>) -> CocoWindow<f64> {
        CocoWindow::new(k, 1.0, SolverConfig::plug_in()).unwrap()
    }

    #[test]
    fn unit_window_is_identity() {
        let mut w = window(Some(1));
        assert_eq!(w.push(&[0.0], &[2.0]).unwrap(), vec![2.0]);
        assert_eq!(w.push(&[1.0], &[-7.0]).unwrap(), vec![-7.0]);
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn feasible_pair_untouched() {
        let mut w = window(Some(2));
        w.push(&[0.0], &[0.0]).unwrap();
        assert_eq!(w.push(&[1.0], &[0.5]).unwrap(), vec![0.5]);
    }

    #[test]
    fn violated_pair_newest_gets_closed_form() {
        let mut w = window(Some(2));
        w.push(&[0.0], &[0.0]).unwrap();
        let theta = w.push(&[1.0], &[2.0]).unwrap();
        assert!((theta[0] - 1.5).abs() < 1e-15);
        assert_eq!(w.last_stats().unwrap().method, SolveMethod::ClosedForm);
    }

    #[test]
    fn ring_evicts_oldest() {
        let mut w = window(Some(3));
        for i in 0..5 {
            w.push(&[i as f64], &[0.0]).unwrap();
        }
        let (q, ids) = w.query_set().unwrap();
        assert_eq!(ids, vec![2, 3, 4]);
        assert_eq!(q.points().as_slice(), &[2.0, 3.0, 4.0]);

        let mut full = window(None);
        for i in 0..5 {
            full.push(&[i as f64], &[0.0]).unwrap();
        }
        assert_eq!(full.len(), 5);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CocoWindow::<f64>::new(Some(0), 1.0, SolverConfig::plug_in()).is_err());
        assert!(CocoWindow::<f64>::new(Some(2), 0.0, SolverConfig::plug_in()).is_err());
        let mut w = window(Some(2));
        w.push(&[0.0], &[0.0]).unwrap();
        assert!(w.push(&[0.0, 1.0], &[0.0, 1.0]).is_err());
    }
}
