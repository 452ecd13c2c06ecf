use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use super::AnalyticError;

/// Gaussian `N(mean, variance)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalApprox {
    mean: f64,
    variance: f64,
}

impl NormalApprox {
    pub fn new(mean: f64, variance: f64) -> Result<Self, AnalyticError> {
        if !(variance > 0.0) || !variance.is_finite() || !mean.is_finite() {
            return Err(AnalyticError::InvalidVariance(variance));
        }
        Ok(Self { mean, variance })
    }

    /// `N(n/3, n/18)`, the large-dimension limit of the distance distribution.
    pub fn for_dim(dim: usize) -> Result<Self, AnalyticError> {
        if dim == 0 {
            return Err(AnalyticError::ZeroDimension);
        }
        Self::new(
            super::theoretical_mean(dim),
            super::theoretical_variance(dim),
        )
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.std_dev();
        (-0.5 * z * z).exp() / (2.0 * PI * self.variance).sqrt()
    }

    /// `Phi((x - mean) / sd) = erfc(-(x - mean) / (sd sqrt 2)) / 2`.
    ///
    /// `erfc` is the fdlibm rational approximation (via `libm`), accurate to
    /// about one ulp, so absolute CDF error stays far below 1e-12. Using
    /// `erfc` on the left tail avoids the cancellation in `1 + erf`.
    pub fn cdf(&self, x: f64) -> f64 {
        let z = (x - self.mean) / (self.std_dev() * SQRT_2);
        0.5 * libm::erfc(-z)
    }
}

pub fn normal_pdf(approx: &NormalApprox, x: f64) -> f64 {
    approx.pdf(x)
}

pub fn normal_cdf(approx: &NormalApprox, x: f64) -> f64 {
    approx.cdf(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Gauss-Legendre (5 nodes) of the standard normal density.
    fn std_normal_mass(a: f64, b: f64, panels: usize) -> f64 {
        const X: [f64; 5] = [
            0.0,
            -0.538_469_310_105_683,
            0.538_469_310_105_683,
            -0.906_179_845_938_664,
            0.906_179_845_938_664,
        ];
        const W: [f64; 5] = [
            0.568_888_888_888_889,
            0.478_628_670_499_366,
            0.478_628_670_499_366,
            0.236_926_885_056_189,
            0.236_926_885_056_189,
        ];
        let h = (b - a) / panels as f64;
        let mut sum = 0.0;
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * h;
            for (x, w) in X.iter().zip(W) {
                let z = mid + 0.5 * h * x;
                sum += w * 0.5 * h * (-0.5 * z * z).exp();
            }
        }
        sum / (2.0 * PI).sqrt()
    }

    #[test]
    fn cdf_is_half_at_mean() {
        for dim in [1, 7, 100] {
            let n = NormalApprox::for_dim(dim).unwrap();
            assert_eq!(n.cdf(n.mean()), 0.5);
        }
    }

    #[test]
    fn peak_height() {
        let n = NormalApprox::for_dim(100).unwrap();
        let want = 1.0 / (2.0 * PI * 100.0 / 18.0).sqrt();
        assert!((normal_pdf(&n, 100.0 / 3.0) - want).abs() < 1e-15);
    }

    #[test]
    fn one_sigma_mass_matches_quadrature() {
        let oracle = std_normal_mass(-1.0, 1.0, 200);
        assert!((oracle - 0.682_689_492_137_086).abs() < 1e-12);
        for dim in [1, 10, 100] {
            let n = NormalApprox::for_dim(dim).unwrap();
            let s = n.std_dev();
            let mass = normal_cdf(&n, n.mean() + s) - normal_cdf(&n, n.mean() - s);
            assert!((mass - oracle).abs() < 1e-9, "dim {dim}: {mass}");
        }
    }

    #[test]
    fn cdf_matches_quadrature_across_range() {
        let n = NormalApprox::new(0.0, 1.0).unwrap();
        for &x in &[-8.0, -5.0, -2.5, -0.3, 0.7, 2.0, 4.5] {
            // mass below -12 is < 1e-32
            let q = std_normal_mass(-12.0, x, 4000);
            assert!((n.cdf(x) - q).abs() < 1e-12, "x {x}: {} vs {q}", n.cdf(x));
        }
    }

    #[test]
    fn rejects_bad_variance() {
        assert!(NormalApprox::new(0.0, 0.0).is_err());
        assert!(NormalApprox::new(0.0, -1.0).is_err());
        assert!(NormalApprox::new(0.0, f64::NAN).is_err());
        assert!(NormalApprox::for_dim(0).is_err());
    }
}
