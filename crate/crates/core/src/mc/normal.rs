use std::f64::consts::SQRT_2;

/// Standard normal CDF.
///
/// Evaluated on `|z|` and reflected, so `Φ(−z) + Φ(z) = 1` holds to rounding.
pub fn norm_cdf(z: f64) -> f64 {
    let tail = 0.5 * libm::erfc(z.abs() / SQRT_2);
    if z < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson on the density over `[-40, z]`.
    fn simpson_cdf(z: f64) -> f64 {
        let a = -40.0;
        let n = 400_000;
        let h = (z - a) / n as f64;
        let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut s = pdf(a) + pdf(z);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * pdf(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn symmetry_and_center() {
        assert_eq!(norm_cdf(0.0), 0.5);
        for &z in &[0.1, 0.7, 1.3, 2.9, 5.5, 9.0] {
            assert!((norm_cdf(-z) - (1.0 - norm_cdf(z))).abs() <= 1e-12);
        }
    }

    #[test]
    fn matches_quadrature() {
        assert!((norm_cdf(1.96) - 0.975002).abs() < 1e-6);
        for &z in &[-6.0, -3.2, -1.0, -0.25, 0.4, 1.96, 2.5, 4.0] {
            let q = simpson_cdf(z);
            assert!((norm_cdf(z) - q).abs() <= 1e-7, "z={z}: {} vs {q}", norm_cdf(z));
        }
    }
}
