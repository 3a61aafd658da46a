use crate::error::{invalid, Error, Result};
use crate::linalg::axpy;
use crate::scalar::Scalar;

/// Step size rule for SGD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule<T> {
    Fixed(T),
    /// `γ_k = C / k` with `k` counted from 1.
    Decreasing(T),
}

impl<T: Scalar> StepSchedule<T> {
    pub fn validate(&self) -> Result<()> {
        let (name, v) = match *self {
            StepSchedule::Fixed(g) => ("gamma", g),
            StepSchedule::Decreasing(c) => ("C", c),
        };
        if v > T::zero() && v.is_finite() {
            Ok(())
        } else {
            Err(invalid(name, format!("must be positive and finite, got {v}")))
        }
    }

    pub fn step_size(&self, k: usize) -> T {
        match *self {
            StepSchedule::Fixed(g) => g,
            StepSchedule::Decreasing(c) => c / T::of_usize(k.max(1)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SgdState<T> {
    pub x: Vec<T>,
    pub schedule: StepSchedule<T>,
    /// Number of steps taken so far.
    pub k: usize,
}

impl<T: Scalar> SgdState<T> {
    pub fn new(x0: Vec<T>, schedule: StepSchedule<T>) -> Result<Self> {
        schedule.validate()?;
        Ok(Self { x: x0, schedule, k: 0 })
    }

    pub fn step(&mut self, g: &[T]) -> Result<()> {
        if g.len() != self.x.len() {
            return Err(Error::DimensionMismatch { expected: self.x.len(), found: g.len() });
        }
        self.k += 1;
        let gamma = self.schedule.step_size(self.k);
        axpy(-gamma, g, &mut self.x);
        Ok(())
    }
}

/// Running mean of iterates, `x̄_k = (x_0 + … + x_k) / (k + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrAverage<T> {
    mean: Vec<T>,
    count: usize,
}

impl<T: Scalar> PrAverage<T> {
    pub fn new(x0: &[T]) -> Self {
        Self { mean: x0.to_vec(), count: 1 }
    }

    pub fn push(&mut self, x: &[T]) {
        self.count += 1;
        let w = T::one() / T::of_usize(self.count);
        for (m, &v) in self.mean.iter_mut().zip(x) {
            *m += w * (v - *m);
        }
    }

    pub fn mean(&self) -> &[T] {
        &self.mean
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// Batch mean of a nonempty iterate sequence.
pub fn pr_average<T: Scalar, R: AsRef<[T]>>(iterates: &[R]) -> Result<Vec<T>> {
    let first = iterates.first().ok_or(Error::Empty("iterate sequence"))?.as_ref();
    let mut sum = vec![T::zero(); first.len()];
    for x in iterates {
        let x = x.as_ref();
        if x.len() != sum.len() {
            return Err(Error::DimensionMismatch { expected: sum.len(), found: x.len() });
        }
        for (s, &v) in sum.iter_mut().zip(x) {
            *s += v;
        }
    }
    let n = T::of_usize(iterates.len());
    Ok(sum.into_iter().map(|s| s / n).collect())
}
