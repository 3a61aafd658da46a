use crate::error::{Error, Result};

/// Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√n`; zero when `n < 2`.
    pub se: f64,
    pub n: usize,
}

impl McEstimate {
    pub fn from_samples(xs: &[f64]) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::Empty("Monte-Carlo sample"));
        }
        let n = xs.len();
        let mean = compensated_sum(xs.iter().copied()) / n as f64;
        let se = if n < 2 {
            0.0
        } else {
            let ss = compensated_sum(xs.iter().map(|&x| (x - mean) * (x - mean)));
            (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt()
        };
        Ok(Self { mean, se, n })
    }

    /// `true` when `|mean − value| ≤ k·se`.
    pub fn within(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.se
    }
}

/// Neumaier summation; insensitive to ordering up to a few ulps of the total.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Least-squares slope of `y ≈ a·x` with the intercept fixed at zero.
pub fn slope_through_origin(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: xs.len(), found: ys.len() });
    }
    let sxx = compensated_sum(xs.iter().map(|x| x * x));
    if sxx <= 0.0 {
        return Err(crate::error::invalid("xs", "need at least one nonzero abscissa"));
    }
    Ok(compensated_sum(xs.iter().zip(ys).map(|(x, y)| x * y)) / sxx)
}
